#!/usr/bin/env python3
"""
paperdata.py

The constants of the rank-6 certificate (M', W_eps, W, H', H_eps, the affine
map f(x) = C x + d, the polytope P = {x : f(x) >= 0} and the point lists r, q^eps,
q^*), the entry-wise constraint table on W_eps, and the end-to-end exact
certificate checks.

All literals below use the entry grammar of exactnum; data/*.mat hold golden
copies in the matrix text format and tests assert both agree.

Usage:
    python paperdata.py                # print the certificate report
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import pandas as pd

from exactnum import QuadExt, format_entry, parse_entry, parse_rational, sign
from linalg import (ExactMatrix, InconsistentSystemError, format_matrix, hstack, identity,
                    is_stochastic, matmul, rank, solve)

log = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / "data"

EPSILON = Fraction(1, 100000)

Point3 = Tuple[Any, Any, Any]

# ────────────────────────── literals

MPRIME_ROWS = (
    "5/44 5/11 85/121 0 0 0",
    "0 0 0 2/11 3/11 7/33",
    "1/11 1/44 2/121 1/44 15/88 17/88",
    "1/44 1/44 8/121 1/44 19/88 5/24",
    "3/11 3/11 12/121 8/11 2/11 2/33",
    "1/2 5/22 14/121 1/22 7/44 43/132",
)

WEPS_ROWS = (
    "0 133/165 640/2233 0 0",
    "1/111540 0 0 17209/58047 997/5082",
    "114721/892320 1/146850 17/506 385/1759 2921/203280",
    "47/1248 413/5874 1/102718 2915/10554 4381/203280",
    "36/169 22/267 18674/51359 1/116094 3252/4235",
    "276953/446160 1009/24475 16239/51359 1100/5277 1/101640",
)

W_ROWS = (
    "0 5/7+5/77s 15/77+5/77s 0 0",
    "0 0 0 20/77+2/77s 48/187-8/187s",
    "0+1/11s 0 4/77-1/77s 3/14+1/308s 14/187-8/187s",
    "-1/11+1/11s 4/77+1/77s 0 39/154+5/308s 21/187-12/187s",
    "8/11-4/11s 12/77-4/77s 4/11 0 104/187+28/187s",
    "4/11+2/11s 6/77-2/77s 30/77-4/77s 3/11-1/22s 0",
)

HPRIME_ROWS = (
    "1/4+1/4s 0 0+1/11s 1/4-1/8s 0 1/6+1/12s",
    "0 1/2-1/8s 1-1/11s 0 0 0",
    "3/4-1/4s 1/2+1/8s 0 0 0 0",
    "0 0 0 0 21/34+7/68s 5/6-1/12s",
    "0 0 0 3/4+1/8s 13/34-7/68s 0",
)

HEPS_ROWS = (
    "30419/40560+28679/162240s -2728/46725+5791/140175s 2741/98049-642/32683s "
    "-689/10554+15595/337728s 389/1848-5501/36960s",
    "0 163318/140175-7277/62300s 5958/32683-50543/392196s 0 0",
    "0 -2137/20025+6047/80100s 11062/14007+8321/56028s 0 0",
    "7443/8840-51313/86190s 0 0 148897/179418+172627/1435344s -1741/26180+1847/39270s",
    "-408157/689520+1154473/2758080s 0 0 7039/29903-318541/1913792s 134461/157080+1163/11424s",
)

C_ROWS = (
    "0 10/11 0",
    "0 0 4/11",
    "-1/11 -2/11 1/22",
    "-1/11 0 5/22",
    "4/11 0 0",
    "-2/11 -8/11 -7/11",
)

D_ROWS = ("0", "0", "2/11", "1/11", "0", "8/11")

R_POINTS = (
    "3/4 1/8 0",
    "3/4 1/2 0",
    "3/11 17/22 0",
    "2 0 1/2",
    "1/2 0 3/4",
    "1/6 0 7/12",
)

QEPS_POINTS = (
    "99/169 0 1/40560",
    "121/534 133/150 0",
    "9337/9338 64/203 0",
    "1/42216 0 17209/21108",
    "813/385 0 997/1848",
)

QSTAR_POINTS = (
    "2-1s 0 0",
    "3/7-1/7s 11/14+1/14s 0",
    "1 3/14+1/14s 0",
    "0 0 5/7+1/14s",
    "26/17+7/17s 0 12/17-2/17s",
)

# Half-spaces of P in the order of the rows of C.
FACET_LABELS = (
    "y >= 0",
    "z >= 0",
    "-x/2 - y + z/4 + 1 >= 0",
    "-x + 5z/2 + 1 >= 0",
    "x >= 0",
    "-x/4 - y - 7z/8 + 1 >= 0",
)

# Entry-wise constraints on W_eps; "eps" stands for the tolerance.
FIGURE4_TABLE = (
    (1, 1, "eq0", "0"), (1, 2, "ge", "4/5"), (1, 3, "ge", "143/500"), (1, 3, "le", "287/1000"),
    (1, 4, "eq0", "0"), (1, 5, "eq0", "0"),
    (2, 1, "le", "eps"), (2, 2, "eq0", "0"), (2, 3, "eq0", "0"), (2, 4, "ge", "29/100"),
    (2, 5, "ge", "49/250"),
    (3, 2, "le", "eps"), (3, 3, "ge", "67/2000"), (3, 4, "ge", "21/100"), (3, 5, "le", "3/200"),
    (4, 2, "ge", "7/100"), (4, 3, "le", "eps"), (4, 4, "ge", "27/100"), (4, 5, "le", "11/500"),
    (5, 4, "le", "eps"), (5, 5, "ge", "767/1000"),
    (6, 1, "ge", "31/50"), (6, 3, "le", "8/25"), (6, 4, "le", "21/100"), (6, 5, "le", "eps"),
)

GOLDEN_FILES = {
    "Mprime": "Mprime.mat",
    "Weps": "Weps.mat",
    "M": "M.mat",
    "W": "W.mat",
    "Hprime": "Hprime.mat",
    "Heps": "Heps.mat",
    "C": "C.mat",
    "dvec": "d.mat",
    "r": "r_points.mat",
    "qeps": "qeps_points.mat",
    "qstar": "qstar_points.mat",
}


def _matrix(rows: Sequence[str]) -> ExactMatrix:
    return ExactMatrix.from_rows([[parse_entry(t) for t in r.split()] for r in rows])


def _points(rows: Sequence[str]) -> Tuple[Point3, ...]:
    return tuple(tuple(parse_entry(t) for t in r.split()) for r in rows)


def point_matrix(points: Sequence[Point3]) -> ExactMatrix:
    """3 x n matrix with the points as columns."""
    return ExactMatrix.from_rows([[p[k] for p in points] for k in range(3)])


# ────────────────────────── affine map

class AffineMap3to6:
    """f(x) = C x + d with an injective linear part."""

    def __init__(self, C: ExactMatrix, dvec: ExactMatrix) -> None:
        if C.shape != (6, 3) or dvec.shape != (6, 1):
            raise ValueError(f"expected C 6x3 and d 6x1, got {C.shape} and {dvec.shape}")
        if rank(C) != 3:
            raise ValueError("linear part of f must have rank 3")
        self.C = C
        self.dvec = dvec

    def apply(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        if len(x) != 3:
            raise ValueError(f"f takes a point in 3 coordinates, got {len(x)}")
        y = matmul(self.C, ExactMatrix.column_vector(list(x)))
        return tuple(y[i, 0] + self.dvec[i, 0] for i in range(6))

    def preimage(self, v: Sequence[Any]) -> Tuple[Any, ...]:
        """f^-1(v); raises InconsistentSystemError when v is off the image of f."""
        return tuple(solve(self.C, [v[i] - self.dvec[i, 0] for i in range(6)]))


def apply_f(fmap: AffineMap3to6, x: Sequence[Any]) -> Tuple[Any, ...]:
    return fmap.apply(x)


# ────────────────────────── constants

@dataclass(frozen=True)
class PaperConstants:
    Mprime: ExactMatrix
    Weps: ExactMatrix
    M: ExactMatrix
    W: ExactMatrix
    Hprime: ExactMatrix
    Heps: ExactMatrix
    C: ExactMatrix
    dvec: ExactMatrix
    r: Tuple[Point3, ...]
    qeps: Tuple[Point3, ...]
    qstar: Tuple[Point3, ...]

    @property
    def f(self) -> AffineMap3to6:
        return AffineMap3to6(self.C, self.dvec)

    def matrices(self) -> Dict[str, ExactMatrix]:
        return {
            "Mprime": self.Mprime, "Weps": self.Weps, "M": self.M, "W": self.W,
            "Hprime": self.Hprime, "Heps": self.Heps, "C": self.C, "dvec": self.dvec,
            "r": point_matrix(self.r).transpose(),
            "qeps": point_matrix(self.qeps).transpose(),
            "qstar": point_matrix(self.qstar).transpose(),
        }


@lru_cache(maxsize=1)
def paper_constants() -> PaperConstants:
    Mprime = _matrix(MPRIME_ROWS)
    Weps = _matrix(WEPS_ROWS)
    return PaperConstants(
        Mprime=Mprime,
        Weps=Weps,
        M=hstack(Mprime, Weps),
        W=_matrix(W_ROWS),
        Hprime=_matrix(HPRIME_ROWS),
        Heps=_matrix(HEPS_ROWS),
        C=_matrix(C_ROWS),
        dvec=_matrix(D_ROWS),
        r=_points(R_POINTS),
        qeps=_points(QEPS_POINTS),
        qstar=_points(QSTAR_POINTS),
    )


def mutate(constants: PaperConstants, spec: str) -> PaperConstants:
    """Shift one matrix entry: ``NAME:i,j:delta`` with 1-based i, j.

    delta is an entry (``1/1000000``, ``-1/11s``) or a decimal (``+1e-6``).
    """
    try:
        name, pos, delta_text = spec.split(":")
        i, j = (int(t) for t in pos.split(","))
    except ValueError:
        raise ValueError(f"mutation must look like NAME:i,j:delta, got {spec!r}") from None
    matrix_fields = ("Mprime", "Weps", "M", "W", "Hprime", "Heps", "C", "dvec")
    if name not in matrix_fields:
        raise ValueError(f"unknown matrix {name!r}; choose from {', '.join(matrix_fields)}")
    try:
        delta: Any = Fraction(delta_text)
    except ValueError:
        delta = parse_entry(delta_text)
    A: ExactMatrix = getattr(constants, name)
    if not (1 <= i <= A.rows and 1 <= j <= A.cols):
        raise ValueError(f"position ({i},{j}) outside {name} ({A.rows}x{A.cols})")
    log.info(f"mutating {name}[{i},{j}] by {format_entry(delta)}")
    return dataclasses.replace(constants, **{name: A.with_entry(i - 1, j - 1, A[i - 1, j - 1] + delta)})


def read_golden(name: str) -> str:
    return (DATA_DIR / GOLDEN_FILES[name]).read_text(encoding="utf-8")


# ────────────────────────── polytope P

@dataclass(frozen=True)
class Membership:
    inside: bool
    values: Tuple[Any, ...]
    violated: Tuple[str, ...] = ()
    facet: Optional[str] = None

    def __bool__(self) -> bool:
        return self.inside


def membership_in_P(x: Sequence[Any], constants: Optional[PaperConstants] = None) -> Membership:
    """Cx + d >= 0; `facet` is the most violated half-space, if any."""
    pc = constants or paper_constants()
    values = pc.f.apply(x)
    violated = tuple(FACET_LABELS[i] for i, v in enumerate(values) if sign(v) < 0)
    if not violated:
        return Membership(True, values)
    worst = min((i for i, v in enumerate(values) if sign(v) < 0), key=lambda i: values[i])
    return Membership(False, values, violated, FACET_LABELS[worst])


# ────────────────────────── constraint table

CONSTRAINT_KINDS = ("eq0", "le", "ge")


@dataclass(frozen=True)
class Constraint:
    row: int
    col: int
    kind: str
    bound: Fraction

    def holds(self, value: Any) -> bool:
        if self.kind == "eq0":
            return sign(value) == 0
        if self.kind == "le":
            return value <= self.bound
        return value >= self.bound

    def describe(self) -> str:
        if self.kind == "eq0":
            return f"W[{self.row},{self.col}] = 0"
        op = "<=" if self.kind == "le" else ">="
        return f"W[{self.row},{self.col}] {op} {format_entry(self.bound)}"


class ConstraintTable:
    """Entry-wise constraints on a 6x5 matrix, 1-based positions."""

    COLUMNS = ["row", "col", "kind", "bound"]

    def __init__(self, constraints: Iterable[Constraint], rows: int = 6, cols: int = 5) -> None:
        self.rows, self.cols = rows, cols
        self.constraints: List[Constraint] = []
        for c in constraints:
            if c.kind not in CONSTRAINT_KINDS:
                raise ValueError(f"constraint kind must be one of {CONSTRAINT_KINDS}, got {c.kind!r}")
            if not (1 <= c.row <= rows and 1 <= c.col <= cols):
                raise ValueError(f"constraint position ({c.row},{c.col}) outside {rows}x{cols}")
            if not (0 <= c.bound <= 1):
                raise ValueError(f"constraint bound {c.bound} at ({c.row},{c.col}) outside [0,1]")
            self.constraints.append(c)

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ConstraintTable):
            return NotImplemented
        return sorted(self.constraints, key=_constraint_key) == sorted(other.constraints, key=_constraint_key)

    def bounds(self) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
        lo = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        up = [[Fraction(1)] * self.cols for _ in range(self.rows)]
        for c in self.constraints:
            i, j = c.row - 1, c.col - 1
            if c.kind == "eq0":
                up[i][j] = Fraction(0)
            elif c.kind == "le":
                up[i][j] = min(up[i][j], c.bound)
            else:
                lo[i][j] = max(lo[i][j], c.bound)
        return lo, up

    def zero_cells(self) -> List[Tuple[int, int]]:
        return [(c.row, c.col) for c in self.constraints if c.kind == "eq0"]

    def violations(self, W: ExactMatrix) -> List[Tuple[Constraint, Any]]:
        if W.shape != (self.rows, self.cols):
            raise ValueError(f"table covers {self.rows}x{self.cols}, matrix is {W.rows}x{W.cols}")
        return [(c, W[c.row - 1, c.col - 1]) for c in self.constraints
                if not c.holds(W[c.row - 1, c.col - 1])]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [[str(c.row), str(c.col), c.kind, format_entry(c.bound)] for c in self.constraints],
            columns=self.COLUMNS)

    @classmethod
    def from_frame(cls, df: pd.DataFrame) -> ConstraintTable:
        missing = [c for c in cls.COLUMNS if c not in df.columns]
        if missing:
            raise ValueError(f"constraint table missing columns: {', '.join(missing)}")
        rows = []
        for n, rec in enumerate(df.to_dict("records"), 2):
            try:
                rows.append(Constraint(int(rec["row"]), int(rec["col"]), rec["kind"].strip(),
                                       parse_rational(rec["bound"] or "0")))
            except ValueError as exc:
                raise ValueError(f"constraint table line {n}: {exc}") from None
        return cls(rows)

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> ConstraintTable:
        df = pd.read_csv(path, dtype=str, comment="#").fillna("")
        return cls.from_frame(df)

    def write_csv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, index=False)


def _constraint_key(c: Constraint) -> Tuple[int, int, str, Fraction]:
    return c.row, c.col, c.kind, c.bound


def figure4_constraints(eps: Fraction = EPSILON) -> ConstraintTable:
    return ConstraintTable(
        Constraint(i, j, kind, eps if text == "eps" else parse_rational(text))
        for i, j, kind, text in FIGURE4_TABLE)


def exact_constraints(W: ExactMatrix) -> ConstraintTable:
    """Pin every entry of a rational matrix: zeros become eq0, others ge and le."""
    out = []
    for i in range(W.rows):
        for j in range(W.cols):
            v = W[i, j]
            if isinstance(v, QuadExt):
                raise ValueError("exact constraint tables need rational entries")
            if v == 0:
                out.append(Constraint(i + 1, j + 1, "eq0", Fraction(0)))
            else:
                out += [Constraint(i + 1, j + 1, "ge", v), Constraint(i + 1, j + 1, "le", v)]
    return ConstraintTable(out, W.rows, W.cols)


# ────────────────────────── certificate

@dataclass
class CheckResult:
    id: str
    description: str
    passed: bool
    defect: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"id": self.id, "description": self.description,
                "status": "pass" if self.passed else "fail", "defect": self.defect}


@dataclass
class CertificateReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, check_id: str) -> CheckResult:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)


def _first_difference(A: ExactMatrix, B: ExactMatrix) -> Optional[str]:
    if A.shape != B.shape:
        return f"shape {A.rows}x{A.cols} vs {B.rows}x{B.cols}"
    diffs = [(i, j) for i in range(A.rows) for j in range(A.cols) if A[i, j] != B[i, j]]
    if not diffs:
        return None
    i, j = diffs[0]
    return (f"{len(diffs)} entries differ; first at ({i + 1},{j + 1}): "
            f"defect {format_entry(A[i, j] - B[i, j])}")


def _vector_defect(label: str, got: Sequence[Any], want: Sequence[Any]) -> Optional[str]:
    for k, (g, w) in enumerate(zip(got, want)):
        if g != w:
            return f"{label}: coordinate {k + 1} defect {format_entry(g - w)}"
    return None


def _check_planes(pc: PaperConstants) -> Optional[str]:
    # r1..r3 span the plane z = 0, r4..r6 the plane y = 0
    for pts, axis, name in ((pc.r[:3], 2, "z"), (pc.r[3:], 1, "y")):
        if any(p[axis] != 0 for p in pts):
            return f"points {pts} leave the plane {name} = 0"
        diffs = ExactMatrix.from_rows([[p[k] - pts[0][k] for k in range(3)] for p in pts[1:]])
        if rank(diffs) != 2:
            return f"points on the plane {name} = 0 are collinear"
    return None


def _check_interior(pc: PaperConstants) -> Optional[str]:
    # With q^eps = q^* H_eps, interior means three strictly positive weights on a proper triangle.
    H = pc.Heps
    for j in range(H.cols):
        support = [k for k in range(H.rows) if sign(H[k, j]) != 0]
        if len(support) != 3:
            return f"column {j + 1} of H_eps uses {len(support)} vertices"
        if any(sign(H[k, j]) < 0 for k in support):
            return f"column {j + 1} of H_eps has a negative weight"
        tri = [pc.qstar[k] for k in support]
        diffs = ExactMatrix.from_rows([[p[m] - tri[0][m] for m in range(3)] for p in tri[1:]])
        if rank(diffs) != 2:
            return f"triangle for column {j + 1} of H_eps is degenerate"
    return None


def verify_certificate(constants: Optional[PaperConstants] = None,
                       constraints: Optional[ConstraintTable] = None) -> CertificateReport:
    pc = constants or paper_constants()
    table = constraints or figure4_constraints()
    report = CertificateReport()

    def add(check_id: str, description: str, defect: Optional[str]) -> None:
        report.checks.append(CheckResult(check_id, description, defect is None, defect))
        log.debug(f"check {check_id}: {'pass' if defect is None else 'FAIL ' + defect}")

    def guarded(check_id: str, description: str, fn) -> None:
        try:
            add(check_id, description, fn())
        except (ValueError, ArithmeticError) as exc:
            add(check_id, description, f"{type(exc).__name__}: {exc}")

    guarded("concat", "M = (M' | W_eps)", lambda: _first_difference(pc.M, hstack(pc.Mprime, pc.Weps)))
    guarded("a", "M = W (H' | H_eps)",
            lambda: _first_difference(pc.M, matmul(pc.W, hstack(pc.Hprime, pc.Heps))))

    def stochastic() -> Optional[str]:
        bad = []
        for name in ("M", "Mprime", "Weps", "W", "Hprime", "Heps"):
            res = is_stochastic(getattr(pc, name))
            if not res:
                defect = f" (defect {format_entry(res.defect)})" if res.defect is not None else ""
                bad.append(f"{name}: {res.reason}{defect}")
        return "; ".join(bad) or None

    guarded("b", "M, M', W_eps, W, H', H_eps are stochastic", stochastic)

    def ranks() -> Optional[str]:
        rm, rw = rank(pc.M), rank(pc.W)
        return None if rm == rw == 4 else f"rank(M) = {rm}, rank(W) = {rw}"

    guarded("c", "rank(M) = rank(W) = 4", ranks)

    def images_r() -> Optional[str]:
        f = pc.f
        for i, p in enumerate(pc.r):
            d = _vector_defect(f"f(r{i + 1}) vs M'[:,{i + 1}]", f.apply(p), pc.Mprime.column(i))
            if d:
                return d
        return None

    guarded("d", "f(r_i) = M'[:,i] for i = 1..6", images_r)

    def images_q() -> Optional[str]:
        f = pc.f
        for i in range(5):
            d = (_vector_defect(f"f(qeps{i + 1}) vs W_eps[:,{i + 1}]", f.apply(pc.qeps[i]), pc.Weps.column(i))
                 or _vector_defect(f"f(q*{i + 1}) vs W[:,{i + 1}]", f.apply(pc.qstar[i]), pc.W.column(i)))
            if d:
                return d
        return None

    guarded("e", "f(q^eps_i) = W_eps[:,i] and f(q*_i) = W[:,i]", images_q)

    def identities() -> Optional[str]:
        Q = point_matrix(pc.qstar)
        d1 = _first_difference(point_matrix(pc.r), matmul(Q, pc.Hprime))
        if d1:
            return f"(r1..r6) != (q*) H': {d1}"
        d2 = _first_difference(point_matrix(pc.qeps), matmul(Q, pc.Heps))
        return f"(q^eps) != (q*) H_eps: {d2}" if d2 else None

    guarded("f", "(r1..r6) = (q*1..q*5) H' and (q^eps) = (q*) H_eps", identities)

    def membership() -> Optional[str]:
        named = [(f"r{i + 1}", p) for i, p in enumerate(pc.r)]
        named += [(f"qeps{i + 1}", p) for i, p in enumerate(pc.qeps)]
        named += [(f"q*{i + 1}", p) for i, p in enumerate(pc.qstar)]
        for label, p in named:
            m = membership_in_P(p, pc)
            if not m:
                return f"{label} violates {m.facet}"
        f = pc.f
        for j in range(pc.M.cols):
            try:
                x = f.preimage(pc.M.column(j))
            except InconsistentSystemError:
                return f"M[:,{j + 1}] is not in the image of f"
            m = membership_in_P(x, pc)
            if not m:
                return f"preimage of M[:,{j + 1}] violates {m.facet}"
        return None

    guarded("g", "r, q^eps, q* and f^-1(M[:,j]) lie in P", membership)

    def table_check() -> Optional[str]:
        bad = table.violations(pc.Weps)
        if not bad:
            return None
        c, v = bad[0]
        return f"{len(bad)} violated; first {c.describe()} with value {format_entry(v)}"

    guarded("h", "W_eps satisfies the entry-wise constraint table", table_check)

    def span() -> Optional[str]:
        r = rank(hstack(pc.M, pc.W))
        return None if r == rank(pc.M) else f"rank(M | W) = {r}"

    guarded("span", "columns of W span the column space of M", span)
    guarded("interior", "q^eps points lie strictly inside triangles of q* points",
            lambda: _check_interior(pc))
    guarded("planes", "r1..r3 span z = 0 and r4..r6 span y = 0", lambda: _check_planes(pc))

    def trivial() -> Optional[str]:
        I6 = identity(6)
        if matmul(I6, pc.M) != pc.M or not is_stochastic(I6):
            return "I6 M != M"
        return None

    guarded("trivial", "M = I6 M is a rational stochastic factorization of size 6", trivial)
    return report


def dump_constants(constants: Optional[PaperConstants] = None) -> str:
    pc = constants or paper_constants()
    return "\n".join(f"# {name}\n{format_matrix(A)}" for name, A in pc.matrices().items())


def main() -> None:
    logging.basicConfig(format="%(asctime)s %(name)s %(levelname)s: %(message)s", level=logging.INFO)
    report = verify_certificate()
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.id:9s} {c.description}"
              + (f"  [{c.defect}]" if c.defect else ""))
    raise SystemExit(0 if report.valid else 2)


if __name__ == "__main__":
    main()
