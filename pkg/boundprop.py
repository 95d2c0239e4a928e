#!/usr/bin/env python3
"""
boundprop.py

Exact bound propagation for type-4 factorizations W~ = L . R of a stochastic
6x5 matrix W~ constrained entry-wise by a ConstraintTable. L (6x5) and R (5x5)
are column stochastic; every entry carries a rational interval [lo, up].

Two drivers:

    replay_type4_proof   runs a proof script (data/type4_proof.ops) whose steps
                         are the rule primitives below; every stated bound is
                         re-derived and checked, ending in a contradiction in
                         every branch.
    run_fixpoint         applies the generic rules until nothing moves, a
                         contradiction appears, or the firing cap is hit.

All indices in scripts, traces and the public API are 1-based.

Usage:
    python boundprop.py [--constraints data/figure4_constraints.csv] [--script data/type4_proof.ops]
"""
from __future__ import annotations

import argparse
import ast
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from paperdata import DATA_DIR, ConstraintTable, figure4_constraints

log = logging.getLogger(__name__)

DEFAULT_SCRIPT = DATA_DIR / "type4_proof.ops"
L_SHAPE = (6, 5)
R_SHAPE = (5, 5)


class RuleNotApplicableError(ValueError):
    pass


class ZeroLowerBoundError(RuleNotApplicableError):
    pass


class UnsupportedDecompositionError(RuleNotApplicableError):
    pass


class UnresolvedMaxError(RuleNotApplicableError):
    pass


class AssumptionError(RuleNotApplicableError):
    pass


class ProofAssertionError(ValueError):
    def __init__(self, step: int, claim: str, detail: str = "") -> None:
        self.step = step
        self.claim = claim
        super().__init__(f"step {step}: could not re-derive {claim}" + (f" ({detail})" if detail else ""))


# ────────────────────────── state

@dataclass(frozen=True)
class TraceEntry:
    step: int
    rule: str
    cell: str
    before: Tuple[Fraction, Fraction]
    after: Tuple[Fraction, Fraction]
    branch: str
    claim: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        def iv(b: Tuple[Fraction, Fraction]) -> Dict[str, Any]:
            return {"lo": str(b[0]), "up": str(b[1]), "approx": [float(b[0]), float(b[1])]}
        return {"step": self.step, "rule": self.rule, "cell": self.cell, "before": iv(self.before),
                "after": iv(self.after), "branch": self.branch, "claim": self.claim}


@dataclass(frozen=True)
class MaxGroup:
    """max{L[row, c] : c in cols} >= bound"""
    name: str
    row: int
    cols: Tuple[int, ...]
    bound: Fraction


@dataclass(frozen=True)
class Assumption:
    """L[row, target] = max{L[row, c] : c in cols}"""
    label: str
    row: int
    cols: Tuple[int, ...]
    target: int


def _box(rows: int, cols: int, value: Fraction) -> List[List[Fraction]]:
    return [[value] * cols for _ in range(rows)]


@dataclass
class BoundState:
    L_lo: List[List[Fraction]]
    L_up: List[List[Fraction]]
    R_lo: List[List[Fraction]]
    R_up: List[List[Fraction]]
    W_lo: List[List[Fraction]]
    W_up: List[List[Fraction]]
    positive: set = field(default_factory=set)
    assumptions: List[Assumption] = field(default_factory=list)
    groups: Dict[str, MaxGroup] = field(default_factory=dict)
    trace: List[TraceEntry] = field(default_factory=list)
    contradiction: Optional[str] = None
    branch: str = "root"
    step: int = 0
    rule: str = ""
    round_denominator: Optional[int] = None
    min_gain: Fraction = Fraction(0)

    @classmethod
    def initial(cls, constraints: ConstraintTable) -> BoundState:
        W_lo, W_up = constraints.bounds()
        return cls(_box(*L_SHAPE, Fraction(0)), _box(*L_SHAPE, Fraction(1)),
                   _box(*R_SHAPE, Fraction(0)), _box(*R_SHAPE, Fraction(1)),
                   [list(r) for r in W_lo], [list(r) for r in W_up])

    def copy(self) -> BoundState:
        return BoundState(
            [list(r) for r in self.L_lo], [list(r) for r in self.L_up],
            [list(r) for r in self.R_lo], [list(r) for r in self.R_up],
            self.W_lo, self.W_up, set(self.positive), list(self.assumptions), dict(self.groups),
            list(self.trace), self.contradiction, self.branch, self.step, self.rule,
            self.round_denominator, self.min_gain,
        )

    @property
    def closed(self) -> bool:
        return self.contradiction is not None

    def _arrays(self, which: str) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
        if which == "L":
            return self.L_lo, self.L_up
        if which == "R":
            return self.R_lo, self.R_up
        if which == "W":
            return self.W_lo, self.W_up
        raise ValueError(f"matrix must be L, R or W, got {which!r}")

    def bounds(self, which: str, i: int, j: int) -> Tuple[Fraction, Fraction]:
        lo, up = self._arrays(which)
        return lo[i - 1][j - 1], up[i - 1][j - 1]

    def lo(self, which: str, i: int, j: int) -> Fraction:
        return self.bounds(which, i, j)[0]

    def up(self, which: str, i: int, j: int) -> Fraction:
        return self.bounds(which, i, j)[1]

    def tighten(self, which: str, i: int, j: int,
                lo: Optional[Fraction] = None, up: Optional[Fraction] = None) -> bool:
        """Intersect the interval of one cell with [lo, up]; returns whether it moved."""
        if self.closed:
            return False
        if which not in ("L", "R"):
            raise ValueError(f"only L and R bounds can be tightened, got {which!r}")
        los, ups = self._arrays(which)
        old = (los[i - 1][j - 1], ups[i - 1][j - 1])
        new_lo, new_up = old
        if lo is not None:
            if self.round_denominator:
                lo = Fraction(math.floor(lo * self.round_denominator), self.round_denominator)
            if lo > new_lo and lo - new_lo >= self.min_gain:
                new_lo = lo
        if up is not None:
            if self.round_denominator:
                up = Fraction(math.ceil(up * self.round_denominator), self.round_denominator)
            if up < new_up and new_up - up >= self.min_gain:
                new_up = up
        if (new_lo, new_up) == old:
            return False
        los[i - 1][j - 1], ups[i - 1][j - 1] = new_lo, new_up
        cell = f"{which}[{i},{j}]"
        self.trace.append(TraceEntry(self.step, self.rule, cell, old, (new_lo, new_up), self.branch))
        if new_lo > new_up:
            self.contradiction = f"{cell}: lower bound {new_lo} exceeds upper bound {new_up}"
            log.debug(f"[{self.branch}] contradiction at {cell}")
        return True

    def annotate(self, cell: str, claim: str) -> None:
        tag_claim(self.trace, cell, self.branch, claim)


def _on_path(entry_branch: str, branch: str) -> bool:
    return entry_branch in ("root", branch) or branch.startswith(entry_branch + "/")


def tag_claim(trace: List[TraceEntry], cell: str, branch: str, claim: str) -> None:
    """Attach a claim to the latest entry for `cell` on `branch` or one of its ancestors."""
    for k in range(len(trace) - 1, -1, -1):
        e = trace[k]
        if e.cell == cell and _on_path(e.branch, branch):
            if e.claim is None:
                trace[k] = replace(e, claim=claim)
            return


def _pure(fn):
    def wrapper(state: BoundState, *args: Any, **kwargs: Any) -> BoundState:
        new = state.copy()
        if not new.closed:
            fn(new, *args, **kwargs)
        return new
    wrapper.__name__ = fn.__name__.lstrip("_")
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ────────────────────────── rules (in place)

def _apply_type4_pattern(s: BoundState) -> None:
    for c in range(1, 6):
        if c != 1:
            s.tighten("L", 1, c, up=Fraction(0))
        if c != 2:
            s.tighten("L", 2, c, up=Fraction(0))
    s.positive |= {(1, 1), (2, 2)}


def _is_positive(s: BoundState, i: int, k: int) -> bool:
    return (i, k) in s.positive or s.lo("L", i, k) > 0


def _zero_product_rule(s: BoundState) -> None:
    """W~[i,j] = 0 forces L[i,k] * R[k,j] = 0 for every k."""
    rows, cols = L_SHAPE
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            if s.up("W", i, j) != 0:
                continue
            for k in range(1, cols + 1):
                if _is_positive(s, i, k):
                    s.tighten("R", k, j, up=Fraction(0))
                if s.lo("R", k, j) > 0:
                    s.tighten("L", i, k, up=Fraction(0))


def _sole_support_rule(s: BoundState, i: int, k: int, j: int) -> None:
    """W~[i,j] = L[i,k] * R[k,j] when L[i,k] is the only entry of row i that can be positive."""
    others = [c for c in range(1, L_SHAPE[1] + 1) if c != k and s.up("L", i, c) > 0]
    if others:
        raise RuleNotApplicableError(f"L[{i},{k}] is not the sole support of row {i}: "
                                     f"L[{i},{others[0]}] may be positive")
    w = s.lo("W", i, j)
    if w <= 0:
        return
    l_up, r_up = s.up("L", i, k), s.up("R", k, j)
    if l_up == 0 or r_up == 0:
        s.contradiction = f"W~[{i},{j}] >= {w} but L[{i},{k}] * R[{k},{j}] is 0"
        return
    s.tighten("R", k, j, lo=w / l_up)
    s.tighten("L", i, k, lo=w / r_up)


def _simple_upper_bound(s: BoundState, i: int, k: int, j: int,
                        Wbound: Optional[Fraction] = None, direction: str = "L") -> None:
    """L[i,k] * R[k,j] <= W~[i,j]: bound one factor through the other's lower bound."""
    w = s.up("W", i, j) if Wbound is None else Fraction(Wbound)
    if direction == "L":
        pivot = s.lo("R", k, j)
        if pivot <= 0:
            raise ZeroLowerBoundError(f"R[{k},{j}] has lower bound 0")
        s.tighten("L", i, k, up=w / pivot)
    elif direction == "R":
        pivot = s.lo("L", i, k)
        if pivot <= 0:
            raise ZeroLowerBoundError(f"L[{i},{k}] has lower bound 0")
        s.tighten("R", k, j, up=w / pivot)
    else:
        raise ValueError(f"direction must be L or R, got {direction!r}")


def _column_sum_rule(s: BoundState, which: str, col: int) -> None:
    rows = L_SHAPE[0] if which == "L" else R_SHAPE[0]
    los = [s.lo(which, i, col) for i in range(1, rows + 1)]
    ups = [s.up(which, i, col) for i in range(1, rows + 1)]
    total_lo, total_up = sum(los), sum(ups)
    for i in range(1, rows + 1):
        s.tighten(which, i, col, lo=1 - (total_up - ups[i - 1]), up=1 - (total_lo - los[i - 1]))


def _mass(s: BoundState, j: int, group: Sequence[int]) -> Fraction:
    outside = [k for k in range(1, R_SHAPE[0] + 1) if k not in group]
    return min(Fraction(1),
               1 - sum((s.lo("R", k, j) for k in outside), Fraction(0)),
               sum((s.up("R", k, j) for k in group), Fraction(0)))


def _max_bound_rule(s: BoundState, i: int, j: int, group: Sequence[int], name: Optional[str] = None) -> None:
    """max over the group of L[i,k] >= (W~[i,j] - outside contribution) / group mass in R[:,j]."""
    group = tuple(group)
    outside = [k for k in range(1, L_SHAPE[1] + 1) if k not in group]
    numerator = s.lo("W", i, j) - sum((s.up("L", i, k) * s.up("R", k, j) for k in outside), Fraction(0))
    if numerator <= 0:
        return
    mass = _mass(s, j, group)
    if mass <= 0:
        s.contradiction = f"W~[{i},{j}] needs mass from columns {list(group)} of R but none is left"
        return
    g = numerator / mass
    if len(group) == 1:
        s.tighten("L", i, group[0], lo=g)
        return
    name = name or f"m{i}{j}"
    prev = s.groups.get(name)
    if prev is None or g > prev.bound:
        s.groups[name] = MaxGroup(name, i, group, g)
        s.trace.append(TraceEntry(s.step, s.rule, f"max L[{i},{{{','.join(map(str, group))}}}]",
                                  (prev.bound if prev else Fraction(0), Fraction(1)), (g, Fraction(1)), s.branch))


def _last_group(s: BoundState, name: Optional[str]) -> MaxGroup:
    if not s.groups:
        raise UnresolvedMaxError("no max bound to resolve")
    if name is None:
        return list(s.groups.values())[-1]
    if name not in s.groups:
        raise UnresolvedMaxError(f"unknown max bound {name!r}")
    return s.groups[name]


def _resolve_max(s: BoundState, name: Optional[str] = None) -> None:
    grp = _last_group(s, name)
    remaining = [c for c in grp.cols if s.up("L", grp.row, c) >= grp.bound]
    if not remaining:
        s.contradiction = f"no member of {grp.name} can reach {grp.bound}"
        return
    if len(remaining) == 1:
        s.tighten("L", grp.row, remaining[0], lo=grp.bound)
        return
    for a in s.assumptions:
        if a.row == grp.row and set(remaining) <= set(a.cols):
            s.tighten("L", grp.row, a.target, lo=grp.bound)
            return
    raise UnresolvedMaxError(f"{grp.name}: columns {remaining} of row {grp.row} can all attain the maximum")


def _interchangeable(s: BoundState, c1: int, c2: int) -> Optional[str]:
    for i in range(1, L_SHAPE[0] + 1):
        if s.bounds("L", i, c1) != s.bounds("L", i, c2):
            return f"L[{i},{c1}] and L[{i},{c2}] have different bounds"
        if ((i, c1) in s.positive) != ((i, c2) in s.positive):
            return f"L[{i},{c1}] and L[{i},{c2}] differ in sign pattern"
    for j in range(1, R_SHAPE[1] + 1):
        if s.bounds("R", c1, j) != s.bounds("R", c2, j):
            return f"R[{c1},{j}] and R[{c2},{j}] have different bounds"
    for a in s.assumptions:
        if (c1 in a.cols) != (c2 in a.cols) or a.target in (c1, c2):
            return f"assumption {a.label} distinguishes columns {c1} and {c2}"
    for g in s.groups.values():
        if (c1 in g.cols) != (c2 in g.cols):
            return f"max bound {g.name} distinguishes columns {c1} and {c2}"
    return None


def _assume_max(s: BoundState, label: str, row: int, cols: Sequence[int], target: int) -> None:
    """Without loss of generality L[row, target] is the largest of the interchangeable columns."""
    cols = tuple(cols)
    if target not in cols:
        raise AssumptionError(f"{label}: target {target} is not among {list(cols)}")
    for a in range(len(cols)):
        for b in range(a + 1, len(cols)):
            why = _interchangeable(s, cols[a], cols[b])
            if why:
                raise AssumptionError(f"{label}: columns are not interchangeable, {why}")
    s.assumptions.append(Assumption(label, row, cols, target))


def _linear_functional_rule(s: BoundState, coeffs: Sequence[Any], j: int, target_col: Optional[int] = None,
                            lhs_bound: Optional[Fraction] = None,
                            support: Optional[Iterable[int]] = None) -> None:
    """
    For a row vector c with a single positive entry c[p]:
    c . W~[:,j] = sum_k (c . L[:,k]) R[k,j] <= max(A, 0) + c[p] * L[p, target],
    A the largest upper bound of c . L[:,k] over the other columns of the support.
    Without a target every column of the support is bounded in turn.
    """
    c = [Fraction(x) for x in coeffs]
    if len(c) != L_SHAPE[0]:
        raise UnsupportedDecompositionError(f"need {L_SHAPE[0]} coefficients, got {len(c)}")
    if all(x == 0 for x in c):
        return
    pos = [i for i, x in enumerate(c, start=1) if x > 0]
    if len(pos) != 1:
        raise UnsupportedDecompositionError(f"need exactly one positive coefficient, got {len(pos)}")
    p = pos[0]
    rows = range(1, L_SHAPE[0] + 1)
    if lhs_bound is None:
        lhs = sum((c[i - 1] * (s.lo("W", i, j) if c[i - 1] > 0 else s.up("W", i, j)) for i in rows), Fraction(0))
    else:
        lhs = Fraction(lhs_bound)
    cols = [k for k in range(1, L_SHAPE[1] + 1) if s.up("R", k, j) > 0] if support is None else list(support)

    def upper(k: int) -> Fraction:
        return sum((c[i - 1] * (s.up("L", i, k) if c[i - 1] > 0 else s.lo("L", i, k)) for i in rows), Fraction(0))

    if not cols and lhs > 0:
        s.contradiction = f"{lhs} <= c . W~[:,{j}] but column {j} of R has no support"
        return
    for t in (cols if target_col is None else [target_col]):
        others = [upper(k) for k in cols if k != t]
        slack = max(max(others, default=Fraction(0)), Fraction(0))
        if t not in cols:
            if lhs > slack:
                s.contradiction = f"{lhs} <= c . W~[:,{j}] <= {slack}"
            return
        s.tighten("L", p, t, lo=(lhs - slack) / c[p - 1])


apply_type4_pattern = _pure(_apply_type4_pattern)
zero_product_rule = _pure(_zero_product_rule)
sole_support_rule = _pure(_sole_support_rule)
simple_upper_bound = _pure(_simple_upper_bound)
column_sum_rule = _pure(_column_sum_rule)
max_bound_rule = _pure(_max_bound_rule)
resolve_max = _pure(_resolve_max)
assume_max = _pure(_assume_max)
linear_functional_rule = _pure(_linear_functional_rule)


def branch_max(state: BoundState, name: Optional[str] = None) -> List[BoundState]:
    """One child per member of a max group, each with that member at least the group bound."""
    if state.closed:
        return [state]
    grp = _last_group(state, name)
    children = []
    for c in grp.cols:
        child = state.copy()
        child.branch = f"{state.branch}/L[{grp.row},{c}]" if state.branch != "root" else f"L[{grp.row},{c}]"
        child.tighten("L", grp.row, c, lo=grp.bound)
        children.append(child)
    return children


# ────────────────────────── proof scripts

def parse_call(line: str) -> Tuple[str, List[Any]]:
    expr = ast.parse(line, mode='eval').body
    if not isinstance(expr, ast.Call) or not isinstance(expr.func, ast.Name):
        raise ValueError(f"Not a call: {line}")
    args = []
    for a in expr.args:
        if isinstance(a, ast.Constant):
            args.append(a.value)
        elif isinstance(a, ast.Name):
            args.append(a.id)
        else:
            args.append(ast.literal_eval(a))
    return expr.func.id, args


@dataclass
class ProofOutcome:
    status: str
    branches: List[Dict[str, Any]]
    trace: List[TraceEntry]
    claims: List[str]
    failed_step: Optional[int] = None
    failed_claim: Optional[str] = None
    error: Optional[str] = None

    @property
    def refuted(self) -> bool:
        return self.status == "contradiction"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "branches": self.branches,
            "claims": self.claims,
            "failed_step": self.failed_step,
            "failed_claim": self.failed_claim,
            "error": self.error,
            "trace": [e.to_dict() for e in self.trace],
        }


class ProofExecutor:
    """Runs proof-script primitives against every live branch."""

    def __init__(self, constraints: ConstraintTable) -> None:
        self.states: List[BoundState] = [BoundState.initial(constraints)]
        self.eps = Fraction(0)
        self.step = 0
        self.trace: List[TraceEntry] = []
        self.claims: List[str] = []

    # -- plumbing
    def _live(self) -> List[BoundState]:
        return [s for s in self.states if not s.closed]

    def _each(self, rule: str, fn, *args: Any) -> None:
        new_states = []
        for s in self.states:
            if s.closed:
                new_states.append(s)
                continue
            s.step, s.rule = self.step, rule
            before = len(s.trace)
            out = fn(s, *args)
            self.trace.extend(out.trace[before:])
            if out.closed and not s.closed:
                log.info(f"step {self.step}: branch {out.branch} closed, {out.contradiction}")
            new_states.append(out)
        self.states = new_states

    def _value(self, text: Any) -> Fraction:
        t = str(text).strip()
        if t.endswith("eps"):
            head = t[:-3].strip()
            return (Fraction(head) if head else Fraction(1)) * self.eps
        return Fraction(t)

    def _check(self, which: str, i: int, j: int, kind: str, value: Any) -> None:
        v = self._value(value)
        op = {"ge": ">=", "le": "<="}[kind]
        claim = f"{which}[{i},{j}] {op} {value}"
        for s in self._live():
            lo, up = s.bounds(which, i, j)
            ok = lo >= v if kind == "ge" else up <= v
            if not ok:
                got = lo if kind == "ge" else up
                raise ProofAssertionError(self.step, claim, f"branch {s.branch} has {float(got):.6g}")
            s.annotate(f"{which}[{i},{j}]", claim)
            tag_claim(self.trace, f"{which}[{i},{j}]", s.branch, claim)
        self.claims.append(claim)

    # -- primitives
    def Epsilon(self, value: Any) -> None:
        self.eps = Fraction(str(value))

    def Pattern(self, name: str) -> None:
        if name != "type4":
            raise ValueError(f"unknown zero pattern {name!r}")
        self._each("Pattern", apply_type4_pattern)

    def ZeroProducts(self) -> None:
        self._each("ZeroProducts", zero_product_rule)

    def SoleSupport(self, i: int, k: int, j: int) -> None:
        self._each("SoleSupport", sole_support_rule, i, k, j)

    def SimpleUpper(self, which: str, i: int, k: int, j: int) -> None:
        self._each("SimpleUpper", simple_upper_bound, i, k, j, None, which)

    def ColumnSum(self, which: str, col: int) -> None:
        self._each("ColumnSum", column_sum_rule, which, col)

    def Assume(self, label: str, row: int, cols: List[int], target: int) -> None:
        self._each("Assume", assume_max, label, row, cols, target)

    def MaxBound(self, row: int, col: int, group: List[int], name: Optional[str] = None) -> None:
        self._each("MaxBound", max_bound_rule, row, col, group, name)

    def ResolveMax(self, name: Optional[str] = None) -> None:
        self._each("ResolveMax", resolve_max, name)

    def LinearFunctional(self, coeffs: List[Any], col: int, target: Optional[int] = None) -> None:
        self._each("LinearFunctional", linear_functional_rule, coeffs, col, target)

    def Branch(self, name: Optional[str] = None) -> None:
        out = []
        for s in self.states:
            s.step, s.rule = self.step, "Branch"
            before = len(s.trace)
            children = branch_max(s, name)
            for child in children:
                self.trace.extend(child.trace[before:])
            out.extend(children)
        self.states = out

    def Expect(self, which: str, i: int, j: int, kind: str, value: Any) -> None:
        self._check(which, i, j, kind, value)

    def ExpectGroup(self, name: str, value: Any) -> None:
        v = self._value(value)
        claim = f"max {name} >= {value}"
        for s in self._live():
            if name not in s.groups or s.groups[name].bound < v:
                raise ProofAssertionError(self.step, claim, f"branch {s.branch}")
        self.claims.append(claim)

    def ExpectContradiction(self) -> None:
        live = self._live()
        if live:
            raise ProofAssertionError(self.step, "contradiction in every branch",
                                      f"branch {live[0].branch} is still open")
        self.claims.append("contradiction in every branch")

    # -- driver
    def run(self, lines: Iterable[str]) -> ProofOutcome:
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            self.step += 1
            cmd, params = parse_call(line)
            fn = getattr(self, cmd, None)
            if fn is None or cmd.startswith("_") or not cmd[0].isupper():
                raise ValueError(f"Unknown primitive: {cmd}")
            log.debug(f"step {self.step}: {line}")
            fn(*params)
        return self.outcome()

    def outcome(self, status: Optional[str] = None) -> ProofOutcome:
        if status is None:
            status = "contradiction" if not self._live() else "open"
        branches = [{"branch": s.branch, "closed": s.closed, "contradiction": s.contradiction}
                    for s in self.states]
        return ProofOutcome(status, branches, list(self.trace), list(self.claims))


def replay_type4_proof(constraints: Optional[ConstraintTable] = None,
                       script_path: Optional[Path] = None) -> ProofOutcome:
    """Replay the scripted type-4 refutation; a failed claim ends with status "failed"."""
    constraints = constraints if constraints is not None else figure4_constraints()
    path = Path(script_path) if script_path else DEFAULT_SCRIPT
    lines = path.read_text(encoding="utf-8").splitlines()
    executor = ProofExecutor(constraints)
    try:
        outcome = executor.run(lines)
    except ProofAssertionError as e:
        log.warning(str(e))
        outcome = executor.outcome("failed")
        outcome.failed_step, outcome.failed_claim, outcome.error = e.step, e.claim, str(e)
        return outcome
    except RuleNotApplicableError as e:
        log.warning(f"step {executor.step}: {e}")
        outcome = executor.outcome("failed")
        outcome.failed_step, outcome.error = executor.step, str(e)
        return outcome
    log.info(f"type-4 replay: {outcome.status}, {len(outcome.claims)} claims, {len(outcome.trace)} trace entries")
    return outcome


# ────────────────────────── fixpoint

@dataclass
class FixpointOutcome:
    status: str
    firings: int
    state: BoundState

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, "firings": self.firings,
                "contradiction": self.state.contradiction,
                "trace": [e.to_dict() for e in self.state.trace]}


def run_fixpoint(constraints: Optional[ConstraintTable] = None, max_firings: int = 10 ** 4,
                 round_denominator: int = 10 ** 12, min_gain: Fraction = Fraction(1, 10 ** 6)) -> FixpointOutcome:
    """Generic rules to saturation; no ordering from the scripted proof is used."""
    constraints = constraints if constraints is not None else figure4_constraints()
    s = BoundState.initial(constraints)
    s.round_denominator, s.min_gain = round_denominator, min_gain
    _apply_type4_pattern(s)
    rows, cols = L_SHAPE
    firings = 0

    def fire(rule: str, fn, *args: Any) -> bool:
        nonlocal firings
        s.rule = rule
        before = len(s.trace)
        try:
            fn(s, *args)
        except RuleNotApplicableError:
            return False
        if len(s.trace) > before:
            firings += 1
            return True
        return False

    while True:
        s.step += 1
        moved = fire("ZeroProducts", _zero_product_rule)
        for i in range(1, rows + 1):
            for j in range(1, cols + 1):
                for k in range(1, cols + 1):
                    if s.closed or firings >= max_firings:
                        break
                    if s.lo("R", k, j) > 0:
                        moved |= fire("SimpleUpper", _simple_upper_bound, i, k, j, None, "L")
                    if s.lo("L", i, k) > 0:
                        moved |= fire("SimpleUpper", _simple_upper_bound, i, k, j, None, "R")
                    moved |= fire("SoleSupport", _sole_support_rule, i, k, j)
                    moved |= fire("MaxBound", _max_bound_rule, i, j, (k,))
        for c in range(1, cols + 1):
            moved |= fire("ColumnSum", _column_sum_rule, "L", c)
            moved |= fire("ColumnSum", _column_sum_rule, "R", c)
        if s.closed:
            status = "contradiction"
            break
        if firings >= max_firings:
            status = "cap_reached"
            break
        if not moved:
            status = "saturated"
            break
    log.info(f"fixpoint: {status} after {firings} firings")
    return FixpointOutcome(status, firings, s)


# ────────────────────────── CLI

def parse_args() -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Replay the type-4 refutation on a constraint table")
    p.add_argument("--constraints", type=Path, help="constraint CSV (default: built-in table)")
    p.add_argument("--script", type=Path, default=DEFAULT_SCRIPT, help="proof script")
    p.add_argument("--mode", choices=["script", "fixpoint"], default="script")
    p.add_argument("--log-level", default="warning",
                   choices=["debug", "info", "warning", "error", "critical"])
    return p.parse_args()


def main() -> None:
    args = parse_args()
    logging.basicConfig(level=getattr(logging, args.log_level.upper()),
                        format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    table = ConstraintTable.read_csv(args.constraints) if args.constraints else figure4_constraints()
    if args.mode == "script":
        outcome = replay_type4_proof(table, args.script).to_dict()
    else:
        outcome = run_fixpoint(table).to_dict()
    json.dump(outcome, sys.stdout, indent=2)
    print()
    sys.exit(0 if outcome["status"] == "contradiction" else 2)


if __name__ == "__main__":
    main()
