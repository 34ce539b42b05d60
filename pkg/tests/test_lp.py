from fractions import Fraction
from itertools import combinations

from hypothesis import given
from hypothesis import strategies as st

from ordgame import lp


def _solve(A, b):
    """Exact Gauss-Jordan; None if singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        M[c] = [v / M[c][c] for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][-1] for r in range(n)]


def vertex_oracle(c, A_ub, b_ub):
    """Best vertex of {x >= 0, A x <= b} by enumerating all bases (bounded instances only)."""
    n = len(c)
    rows = [(list(r), v) for r, v in zip(A_ub, b_ub)]
    rows += [([-1 if k == j else 0 for k in range(n)], 0) for j in range(n)]
    best = None
    for pick in combinations(rows, n):
        x = _solve([r for r, _ in pick], [v for _, v in pick])
        if x is None:
            continue
        if all(sum(a * xi for a, xi in zip(r, x)) <= v for r, v in rows):
            val = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or val > best:
                best = val
    return best


def test_textbook():
    res = lp.maximize([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.status == "optimal"
    assert res.value == 36 and res.x == (2, 6)


def test_infeasible_and_unbounded():
    assert lp.maximize([1], [[1]], [-1]).status == "infeasible"
    assert lp.maximize([1, 0], [[-1, 1]], [1]).status == "unbounded"


def test_equality_and_free_variable():
    # max e s.t. e <= 1 - x, e <= x - 1/2 ... with x + y = 1
    res = lp.maximize([0, 0, 1], [[1, 0, 1], [-1, 0, 1]], [1, Fraction(-1, 2)],
                      [[1, 1, 0]], [1], free=[2])
    assert res.value == Fraction(1, 4)
    assert res.x[0] == Fraction(3, 4)


def test_degenerate_redundant_rows():
    res = lp.maximize([1, 1], [[1, 1], [1, 1], [2, 2]], [1, 1, 2], [[1, -1]], [0])
    assert res.value == 1


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-5, 5), min_size=n, max_size=n),
    st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n), min_size=1, max_size=4),
    st.lists(st.integers(0, 9), min_size=4, max_size=4))))
def test_matches_vertex_enumeration(data):
    c, A, b = data
    A = [row for row in A]
    b = b[:len(A)]
    # a box keeps every instance bounded
    n = len(c)
    A = A + [[1 if k == j else 0 for k in range(n)] for j in range(n)]
    b = b + [7] * n
    res = lp.maximize(c, A, b)
    assert res.status == "optimal"
    assert res.value == vertex_oracle(c, A, b)
    assert all(sum(a * x for a, x in zip(row, res.x)) <= v for row, v in zip(A, b))
    assert all(x >= 0 for x in res.x)
