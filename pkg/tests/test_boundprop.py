import random
from fractions import Fraction

import pytest

from boundprop import (DEFAULT_SCRIPT, AssumptionError, BoundState, ProofExecutor, RuleNotApplicableError,
                       UnresolvedMaxError, UnsupportedDecompositionError, ZeroLowerBoundError, apply_type4_pattern,
                       assume_max, branch_max, column_sum_rule, linear_functional_rule, max_bound_rule, parse_call,
                       replay_type4_proof, resolve_max, run_fixpoint, simple_upper_bound, sole_support_rule,
                       zero_product_rule)
from paperdata import Constraint, ConstraintTable, exact_constraints, figure4_constraints, paper_constants

F = Fraction

EXPECTED_CLAIMS = [
    "R[2,4] >= 0.29", "R[2,5] >= 0.196",
    "L[3,2] <= 0.077", "L[4,2] <= 0.12", "L[6,2] <= 6eps", "L[5,2] <= 4eps", "L[2,2] >= 0.8",
    "R[2,1] <= 2eps", "L[6,3] >= 0.61", "max m55 >= 0.9539", "L[5,4] >= 0.9539",
    "L[3,4] <= 0.0461", "L[4,4] <= 0.0461", "L[3,5] >= 0.02", "R[5,2] <= 50eps", "L[4,5] >= 0.045",
    "R[5,3] <= 23eps",
    "R[1,2] >= 0.8", "L[1,1] >= 0.8", "R[1,3] >= 0.286", "L[3,1] <= 2eps", "R[1,3] <= 0.36",
    "R[3,3] <= 0.53", "R[4,3] >= 0.1", "L[4,4] <= 10eps", "L[4,1] <= 4eps",
    "L[4,3] >= 0.346", "max m33 >= 0.0465",
    "contradiction in every branch",
]


def patterned():
    s = BoundState.initial(figure4_constraints())
    return zero_product_rule(apply_type4_pattern(s))


# ────────────────────────── scripted replay

def test_replay_reaches_contradiction():
    outcome = replay_type4_proof()
    assert outcome.status == "contradiction"
    assert outcome.refuted
    assert outcome.claims == EXPECTED_CLAIMS
    assert [b["branch"] for b in outcome.branches] == ["L[3,3]", "L[3,4]"]
    assert all(b["closed"] and b["contradiction"] for b in outcome.branches)


def test_replay_tags_claims_in_trace():
    tagged = {e.claim for e in replay_type4_proof().trace if e.claim}
    assert "L[6,2] <= 6eps" in tagged
    assert "L[4,3] >= 0.346" in tagged


def test_replay_with_relaxed_tolerance_names_failed_claim():
    outcome = replay_type4_proof(figure4_constraints(F(1, 10)))
    assert outcome.status == "failed"
    assert not outcome.refuted
    assert outcome.failed_step == 13
    assert outcome.failed_claim == "L[6,2] <= 6eps"
    assert "step 13" in outcome.error
    assert outcome.claims == EXPECTED_CLAIMS[:4]


def test_replay_on_exact_weps_table():
    outcome = replay_type4_proof(exact_constraints(paper_constants().Weps))
    assert outcome.status == "contradiction"
    assert outcome.claims == EXPECTED_CLAIMS


def test_replay_is_deterministic():
    assert replay_type4_proof().to_dict() == replay_type4_proof().to_dict()


def test_trace_is_monotone():
    for e in replay_type4_proof().trace:
        (lo0, up0), (lo1, up1) = e.before, e.after
        assert lo1 >= lo0 and up1 <= up0, e.to_dict()


def test_replay_stops_on_inapplicable_rule(tmp_path):
    script = tmp_path / "bad.ops"
    script.write_text('Pattern("type4")\nSimpleUpper("L", 3, 2, 5)\n', encoding="utf-8")
    outcome = replay_type4_proof(script_path=script)
    assert outcome.status == "failed"
    assert outcome.failed_step == 2
    assert outcome.failed_claim is None
    assert "lower bound 0" in outcome.error


def test_open_script_reports_open():
    outcome = ProofExecutor(figure4_constraints()).run(['Pattern("type4")', "ZeroProducts()"])
    assert outcome.status == "open"


def test_unknown_primitive():
    with pytest.raises(ValueError, match="Unknown primitive"):
        ProofExecutor(figure4_constraints()).run(["Frobnicate(1)"])
    with pytest.raises(ValueError, match="unknown zero pattern"):
        ProofExecutor(figure4_constraints()).run(['Pattern("type2")'])


def test_parse_call():
    assert parse_call('Expect("L", 6, 2, "le", "6eps")') == ("Expect", ["L", 6, 2, "le", "6eps"])
    assert parse_call("LinearFunctional([0, 0, 2, 0, 0, -1], 4, 5)") == \
        ("LinearFunctional", [[0, 0, 2, 0, 0, -1], 4, 5])
    with pytest.raises(ValueError):
        parse_call("x + 1")


def test_default_script_exists():
    assert DEFAULT_SCRIPT.is_file()


# ────────────────────────── single rules

def test_type4_pattern_zeroes_rows():
    s = apply_type4_pattern(BoundState.initial(figure4_constraints()))
    assert s.bounds("L", 1, 3) == (0, 0)
    assert s.bounds("L", 2, 5) == (0, 0)
    assert s.bounds("L", 1, 1) == (0, 1)
    assert (1, 1) in s.positive and (2, 2) in s.positive


def test_zero_products():
    s = patterned()
    # W~[1,4] = 0 with L[1,1] > 0
    assert s.up("R", 1, 4) == 0
    # W~[2,3] = 0 with L[2,2] > 0
    assert s.up("R", 2, 3) == 0


def test_rules_are_pure():
    s = patterned()
    before = s.bounds("R", 2, 5)
    t = sole_support_rule(s, 2, 2, 5)
    assert s.bounds("R", 2, 5) == before
    assert t.lo("R", 2, 5) == F(49, 250)


def test_simple_upper_bound_through_sole_support():
    s = sole_support_rule(patterned(), 2, 2, 5)
    t = simple_upper_bound(s, 3, 2, 5)
    # W~[3,5] <= 3/200 and R[2,5] >= 0.196
    assert t.up("L", 3, 2) == F(15, 196)
    u = simple_upper_bound(s, 3, 2, 5, Wbound=F(1, 100))
    assert u.up("L", 3, 2) == F(25, 490)


def test_simple_upper_bound_needs_positive_divisor():
    with pytest.raises(ZeroLowerBoundError):
        simple_upper_bound(patterned(), 3, 2, 5)
    with pytest.raises(ZeroLowerBoundError):
        simple_upper_bound(patterned(), 3, 2, 5, direction="R")
    with pytest.raises(ValueError):
        simple_upper_bound(patterned(), 3, 2, 5, direction="X")


def test_sole_support_needs_single_column():
    with pytest.raises(RuleNotApplicableError):
        sole_support_rule(BoundState.initial(figure4_constraints()), 2, 2, 5)


def test_column_sum_rule():
    s = BoundState.initial(figure4_constraints())
    for i in range(2, 7):
        s.tighten("L", i, 1, up=F(1, 10))
    t = column_sum_rule(s, "L", 1)
    assert t.lo("L", 1, 1) == F(1, 2)
    s.tighten("L", 1, 1, lo=F(19, 20))
    t = column_sum_rule(s, "L", 1)
    assert all(t.up("L", i, 1) == F(1, 20) for i in range(2, 7))


def test_tighten_detects_crossing():
    s = BoundState.initial(figure4_constraints())
    s.tighten("L", 3, 3, lo=F(1, 2))
    s.tighten("L", 3, 3, up=F(1, 4))
    assert s.closed
    assert "L[3,3]" in s.contradiction
    assert not s.tighten("L", 3, 4, lo=F(1, 2))
    with pytest.raises(ValueError):
        BoundState.initial(figure4_constraints()).tighten("W", 1, 1, lo=F(0))


def test_linear_functional_lower_bound():
    s = BoundState.initial(figure4_constraints())
    # column 4 of W~: W[3,4] >= 21/100 and W[6,4] <= 21/100
    for i, k, up in ((3, 1, F(0)), (3, 2, F(0)), (3, 3, F(0)), (3, 4, F(1, 20))):
        s.tighten("L", i, k, up=up)
    t = linear_functional_rule(s, [0, 0, 2, 0, 0, -1], 4, 5)
    # 2*21/100 - 21/100 - 2/20 = 11/100
    assert t.lo("L", 3, 5) == F(11, 200)
    # every other column carries slack from L[3,5] <= 1
    assert linear_functional_rule(s, [0, 0, 2, 0, 0, -1], 4).L_lo == t.L_lo


def test_linear_functional_without_support_is_contradiction():
    s = BoundState.initial(figure4_constraints())
    t = linear_functional_rule(s, [0, 0, 1, 0, 0, 0], 4, support=[])
    assert t.closed


def test_linear_functional_all_zero_is_noop():
    s = patterned()
    t = linear_functional_rule(s, [0] * 6, 4, 5)
    assert t.L_lo == s.L_lo and t.L_up == s.L_up and len(t.trace) == len(s.trace)


@pytest.mark.parametrize("coeffs", [[1, 1, 0, 0, 0, 0], [0, 0, -1, 0, 0, 0], [1, 0, 0]])
def test_linear_functional_shapes(coeffs):
    with pytest.raises(UnsupportedDecompositionError):
        linear_functional_rule(patterned(), coeffs, 4, 5)


def test_replayed_linear_functional_bounds():
    trace = replay_type4_proof().trace
    l35 = [e for e in trace if e.cell == "L[3,5]" and e.rule == "LinearFunctional"]
    l45 = [e for e in trace if e.cell == "L[4,5]" and e.rule == "LinearFunctional"]
    assert l35 and l35[-1].after[0] >= F(2, 100)
    assert l45 and l45[-1].after[0] >= F(45, 1000)


def test_max_bound_single_column():
    s = BoundState.initial(figure4_constraints())
    t = max_bound_rule(s, 6, 1, [1])
    # W~[6,1] >= 31/50 and every R entry is at most 1
    assert t.lo("L", 6, 1) == F(0)
    for k in range(2, 6):
        s.tighten("L", 6, k, up=F(0))
    t = max_bound_rule(s, 6, 1, [1])
    assert t.lo("L", 6, 1) == F(31, 50)


def test_max_group_resolution():
    s = BoundState.initial(figure4_constraints())
    s.tighten("L", 6, 1, up=F(0))
    s.tighten("L", 6, 2, up=F(0))
    t = max_bound_rule(s, 6, 1, [3, 4, 5], "g")
    assert t.groups["g"].bound == F(31, 50)
    with pytest.raises(UnresolvedMaxError):
        resolve_max(t, "g")
    a = assume_max(t, "A", 6, [3, 4, 5], 3)
    assert resolve_max(a, "g").lo("L", 6, 3) == F(31, 50)
    t.tighten("L", 6, 4, up=F(1, 2))
    t.tighten("L", 6, 5, up=F(1, 2))
    assert resolve_max(t, "g").lo("L", 6, 3) == F(31, 50)
    with pytest.raises(UnresolvedMaxError):
        resolve_max(t, "missing")


def test_assumption_needs_interchangeable_columns():
    s = BoundState.initial(figure4_constraints())
    s.tighten("L", 4, 4, up=F(1, 2))
    with pytest.raises(AssumptionError):
        assume_max(s, "A", 6, [3, 4], 3)
    with pytest.raises(AssumptionError):
        assume_max(s, "A", 6, [3, 5], 4)


def test_branch_max_splits_group():
    s = BoundState.initial(figure4_constraints())
    s.tighten("L", 3, 1, up=F(0))
    s.tighten("L", 3, 2, up=F(0))
    s.tighten("L", 3, 5, up=F(0))
    t = max_bound_rule(s, 3, 3, [3, 4], "m")
    children = branch_max(t, "m")
    assert [c.branch for c in children] == ["L[3,3]", "L[3,4]"]
    g = t.groups["m"].bound
    assert children[0].lo("L", 3, 3) == g and children[1].lo("L", 3, 4) == g


# ────────────────────────── soundness

# W~ zeros follow the type-4 table: rows 1 and 2 have a single support column,
# so each zero cell there zeroes the matching entry of R.
TABLE_ZEROS = sorted(figure4_constraints().zero_cells())
L_ZEROS = {(0, k) for k in range(1, 5)} | {(1, k) for k in (0, 2, 3, 4)}
R_ZEROS = {(i - 1, j - 1) for i, j in TABLE_ZEROS}
FREE_COLS = [3, 4, 5]


def random_stochastic(rng, rows, cols, zero=()):
    out = [[F(0)] * cols for _ in range(rows)]
    for j in range(cols):
        col = [F(0) if (i, j) in zero else F(rng.randint(1, 20)) for i in range(rows)]
        total = sum(col)
        for i in range(rows):
            out[i][j] = col[i] / total
    return out


def random_instance(rng, delta=F(1, 50)):
    L = random_stochastic(rng, 6, 5, L_ZEROS)
    R = random_stochastic(rng, 5, 5, R_ZEROS)
    W = [[sum(L[i][k] * R[k][j] for k in range(5)) for j in range(5)] for i in range(6)]
    cons = []
    for i in range(6):
        for j in range(5):
            w = W[i][j]
            if w == 0:
                cons.append(Constraint(i + 1, j + 1, "eq0", F(0)))
                continue
            cons.append(Constraint(i + 1, j + 1, "ge", max(F(0), w - delta)))
            cons.append(Constraint(i + 1, j + 1, "le", min(F(1), w + delta)))
    return L, R, ConstraintTable(cons)


def swap_factor(L, R, a, b):
    """Exchange column a of L with column b and row a of R with row b; L.R is unchanged."""
    for row in L:
        row[a], row[b] = row[b], row[a]
    R[a], R[b] = R[b], R[a]


def assert_contains(state, L, R):
    assert not state.closed, state.contradiction
    for which, M, (rows, cols) in (("L", L, (6, 5)), ("R", R, (5, 5))):
        for i in range(rows):
            for j in range(cols):
                lo, up = state.bounds(which, i + 1, j + 1)
                assert lo <= M[i][j] <= up, f"{which}[{i + 1},{j + 1}]"


def propagate_everything(s):
    for i in range(1, 7):
        for k in range(1, 6):
            for j in range(1, 6):
                try:
                    s = sole_support_rule(s, i, k, j)
                except RuleNotApplicableError:
                    pass
                for direction in ("L", "R"):
                    try:
                        s = simple_upper_bound(s, i, k, j, direction=direction)
                    except ZeroLowerBoundError:
                        pass
            s = max_bound_rule(s, i, k, [k])
    for c in range(1, 6):
        s = column_sum_rule(column_sum_rule(s, "L", c), "R", c)
    return s


def random_functional(rng):
    p = rng.randint(1, 6)
    coeffs = [F(0)] * 6
    coeffs[p - 1] = F(rng.randint(1, 3))
    for i in rng.sample([r for r in range(1, 7) if r != p], rng.randint(1, 3)):
        coeffs[i - 1] = -F(rng.randint(1, 3), rng.randint(1, 4))
    return coeffs


def propagate_grouped(rng, s, row):
    for j in range(1, 6):
        group = sorted(rng.sample(FREE_COLS, rng.choice([2, 3])))
        s = max_bound_rule(s, row, j, group, "g")
        try:
            s = resolve_max(s, "g")
        except UnresolvedMaxError:
            pass
    for j in range(1, 6):
        target = rng.choice([None, 1, 2, 3, 4, 5])
        s = linear_functional_rule(s, random_functional(rng), j, target)
    return s


def run_soundness(trials, seed):
    rng = random.Random(seed)
    for _ in range(trials):
        L, R, table = random_instance(rng)
        s = zero_product_rule(apply_type4_pattern(BoundState.initial(table)))
        row, target = rng.randint(3, 6), rng.choice(FREE_COLS)
        s = assume_max(s, "A", row, FREE_COLS, target)
        top = max((c - 1 for c in FREE_COLS), key=lambda c: L[row - 1][c])
        swap_factor(L, R, top, target - 1)
        s = propagate_grouped(rng, propagate_everything(s), row)
        assert_contains(s, L, R)

        other = rng.choice([r for r in range(3, 7) if r != row])
        group = sorted(rng.sample(FREE_COLS, rng.choice([2, 3])))
        for j in range(1, 6):
            s = max_bound_rule(s, other, j, group, "b")
        assert_contains(s, L, R)
        if "b" not in s.groups:
            continue
        cols = s.groups["b"].cols
        best = max(cols, key=lambda c: L[other - 1][c - 1])
        assert_contains(branch_max(s, "b")[cols.index(best)], L, R)


def test_random_instances_carry_table_zeros():
    _, _, table = random_instance(random.Random(2))
    assert sorted(table.zero_cells()) == TABLE_ZEROS
    s = zero_product_rule(apply_type4_pattern(BoundState.initial(table)))
    assert all(s.up("R", i, j) == 0 for i, j in TABLE_ZEROS)


def test_rules_are_sound_on_random_factorizations():
    run_soundness(200, seed=3)


@pytest.mark.slow
def test_rules_are_sound_on_many_random_factorizations():
    run_soundness(10 ** 4, seed=4)


def test_fixpoint_is_sound_on_random_factorization():
    rng = random.Random(5)
    for _ in range(3):
        L, R, table = random_instance(rng)
        outcome = run_fixpoint(table, max_firings=400)
        assert outcome.status in {"saturated", "cap_reached"}
        assert_contains(outcome.state, L, R)


def test_fixpoint_status():
    outcome = run_fixpoint(max_firings=2000)
    assert outcome.status in {"contradiction", "saturated", "cap_reached"}
    assert outcome.firings > 0
    assert outcome.to_dict()["status"] == outcome.status
