import random
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import pytest

from exactnum import SQRT2, QuadExt
from linalg import (DimensionError, ExactMatrix, InconsistentSystemError, MatrixFormatError, NegativeEntryError,
                    det, format_matrix, hstack, identity, is_stochastic, matmul, normalize_columns, parse_matrix,
                    rank, read_matrix, solve, to_float, write_matrix, zeros)


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = Fraction(1)
        for i, p in enumerate(perm):
            term = term * rows[i][p]
        total = total - term if inversions % 2 else total + term
    return total


def minor_rank(A):
    """Largest k with a nonzero k x k minor."""
    rows = A.to_rows()
    for k in range(min(A.rows, A.cols), 0, -1):
        for ri in combinations(range(A.rows), k):
            for ci in combinations(range(A.cols), k):
                if leibniz_det([[rows[i][j] for j in ci] for i in ri]) != 0:
                    return k
    return 0


def random_matrix(rng, quadratic, m=None, n=None):
    m, n = m or rng.randint(1, 4), n or rng.randint(1, 4)
    if quadratic:
        vals = [QuadExt(rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(m * n)]
    else:
        vals = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(m * n)]
    A = ExactMatrix(m, n, vals)
    if rng.random() < 0.4 and m > 1:
        # force a dependent row
        r0 = A.row(0)
        c = Fraction(rng.randint(-2, 2))
        A = ExactMatrix.from_rows([list(r0), [c * v for v in r0]] + A.to_rows()[2:])
    return A


def test_rank_matches_minor_oracle():
    rng = random.Random(7)
    for trial in range(500):
        A = random_matrix(rng, quadratic=trial % 3 == 0)
        assert rank(A) == minor_rank(A), format_matrix(A)


def test_det_matches_leibniz():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 4)
        A = ExactMatrix(n, n, [QuadExt(rng.randint(-3, 3), rng.randint(-2, 2)) for _ in range(n * n)])
        assert det(A) == leibniz_det(A.to_rows())


def test_det_row_swap():
    assert det(ExactMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert det(identity(5)) == 1
    assert det(zeros(3, 3)) == 0
    with pytest.raises(DimensionError):
        det(zeros(2, 3))


def test_mixed_entries_promote():
    A = ExactMatrix.from_rows([[1, SQRT2], [Fraction(1, 2), 0]])
    assert A.is_quadratic
    assert A.field == "Q(sqrt2)"
    assert det(A) == -SQRT2 / 2


def test_matmul_and_identity():
    A = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert matmul(identity(2), A) == A
    assert matmul(A, identity(3)) == A
    assert matmul(A, A.transpose()) == ExactMatrix.from_rows([[14, 32], [32, 77]])
    with pytest.raises(DimensionError):
        matmul(A, A)


def test_hstack():
    A = ExactMatrix.from_rows([[1], [2]])
    B = ExactMatrix.from_rows([[3, 4], [5, 6]])
    assert hstack(A, B) == ExactMatrix.from_rows([[1, 3, 4], [2, 5, 6]])
    with pytest.raises(DimensionError):
        hstack(A, identity(3))


def test_indexing_is_zero_based():
    A = ExactMatrix.from_rows([[1, 2], [3, 4]])
    assert A[1, 0] == 3
    assert A.column(1) == (Fraction(2), Fraction(4))
    with pytest.raises(IndexError):
        A[2, 0]
    with pytest.raises(AttributeError):
        A.rows = 3
    assert A.with_entry(0, 0, 9)[0, 0] == 9
    assert A[0, 0] == 1


def test_bad_shapes():
    with pytest.raises(DimensionError):
        ExactMatrix(2, 2, [1, 2, 3])
    with pytest.raises(DimensionError):
        ExactMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(TypeError):
        ExactMatrix(1, 1, [0.5])


def test_solve():
    A = ExactMatrix.from_rows([[2, 1], [1, 3]])
    assert solve(A, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    tall = ExactMatrix.from_rows([[1, 0], [0, 1], [1, 1]])
    assert solve(tall, [1, SQRT2, 1 + SQRT2]) == [1, SQRT2]


def test_solve_inconsistent():
    tall = ExactMatrix.from_rows([[1, 0], [0, 1], [1, 1]])
    with pytest.raises(InconsistentSystemError):
        solve(tall, [1, 1, 3])


def test_solve_underdetermined():
    with pytest.raises(DimensionError):
        solve(ExactMatrix.from_rows([[1, 1]]), [1])


def test_is_stochastic():
    assert is_stochastic(ExactMatrix.from_rows([[Fraction(1, 2), 1], [Fraction(1, 2), 0]]))
    res = is_stochastic(ExactMatrix.from_rows([[Fraction(1, 2), 1], [Fraction(1, 3), 0]]))
    assert not res
    assert res.column == 0
    assert res.defect == Fraction(-1, 6)
    neg = is_stochastic(ExactMatrix.from_rows([[2, 1], [-1, 0]]))
    assert not neg and neg.row == 1 and "negative" in neg.reason


def test_normalize_columns():
    A = ExactMatrix.from_rows([[1, 0, 2], [3, 0, 2]])
    S, scales, kept = normalize_columns(A)
    assert kept == (0, 2)
    assert scales == (4, 4)
    assert S == ExactMatrix.from_rows([[Fraction(1, 4), Fraction(1, 2)], [Fraction(3, 4), Fraction(1, 2)]])
    assert is_stochastic(S)
    with pytest.raises(NegativeEntryError):
        normalize_columns(ExactMatrix.from_rows([[1, -1]]))


def random_nonnegative(rng, m, n, quadratic, zero_cols=()):
    def entry():
        if quadratic:
            return QuadExt(rng.randint(2, 4), rng.randint(-1, 1))
        return Fraction(rng.randint(1, 9), rng.randint(1, 4))
    return ExactMatrix(m, n, [Fraction(0) if j in zero_cols else entry() for _ in range(m) for j in range(n)])


def random_stochastic(rng, m, n, quadratic):
    S, _, _ = normalize_columns(random_nonnegative(rng, m, n, quadratic))
    return S


def diag(values):
    n = len(values)
    return ExactMatrix(n, n, [values[i] if i == j else Fraction(0) for i in range(n) for j in range(n)])


def test_rank_of_product_is_bounded_by_factors():
    rng = random.Random(13)
    for trial in range(200):
        A = random_matrix(rng, quadratic=trial % 3 == 0)
        B = random_matrix(rng, quadratic=trial % 4 == 0, m=A.cols)
        assert rank(A @ B) <= min(rank(A), rank(B)), f"{format_matrix(A)}\n{format_matrix(B)}"


def test_product_of_stochastic_matrices_is_stochastic():
    rng = random.Random(17)
    for trial in range(100):
        m, k, n = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 5)
        A = random_stochastic(rng, m, k, quadratic=trial % 2 == 0)
        B = random_stochastic(rng, k, n, quadratic=trial % 3 == 0)
        assert is_stochastic(A) and is_stochastic(B)
        check = is_stochastic(A @ B)
        assert check, check.reason


def test_normalize_columns_reconstructs_kept_columns():
    rng = random.Random(19)
    for trial in range(100):
        m, n = rng.randint(1, 5), rng.randint(2, 5)
        zero_cols = set(rng.sample(range(n), rng.randint(0, n - 1)))
        A = random_nonnegative(rng, m, n, quadratic=trial % 2 == 0, zero_cols=zero_cols)
        S, scales, kept = normalize_columns(A)
        assert set(kept) == set(range(n)) - zero_cols
        assert is_stochastic(S)
        assert S @ diag(scales) == A.select_columns(list(kept))


def test_parse_and_format():
    text = "# comment\n2 2\n1 2-1s\n\n# inner comment\n-1/11+1/11s 0\n"
    A = parse_matrix(text)
    assert A.shape == (2, 2)
    assert A[0, 1] == 2 - SQRT2
    assert format_matrix(A) == "2 2\n1 2-1s\n-1/11+1/11s 0\n"
    assert parse_matrix(format_matrix(A)) == A


@pytest.mark.parametrize("text,fragment", [
    ("", "empty"),
    ("2\n1 2\n", "line 1"),
    ("2 2\n1 2\n", "expected 2 rows"),
    ("1 2\n1 2 3\n", "line 2"),
    ("# c\n1 2\n1 x\n", "line 3"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(MatrixFormatError, match=fragment):
        parse_matrix(text)


def test_file_round_trip(tmp_path):
    A = ExactMatrix.from_rows([[Fraction(5, 44), SQRT2], [0, 1]])
    path = tmp_path / "a.mat"
    write_matrix(A, path)
    assert read_matrix(path) == A


def test_to_float():
    A = ExactMatrix.from_rows([[1, SQRT2]])
    np.testing.assert_allclose(to_float(A), [[1.0, 2 ** 0.5]])
