"""Dense two-phase simplex over exact rationals.

Small problems only (tens of rows). Bland's rule guarantees termination, so
degenerate instances are handled without any tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .game import InvariantViolation

ZERO = Fraction(0)


class LPDefect(InvariantViolation):
    """The solver reached a state that the problem construction rules out."""


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
             free: Sequence[int] = ()) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``.

    Variables are nonnegative unless listed in ``free``. All inputs are
    converted to :class:`~fractions.Fraction`.
    """
    n = len(c)
    free = set(free)
    # column layout: x_j (or x_j^+), then x_j^- for free vars, then slacks
    neg_col = {}
    for j in sorted(free):
        neg_col[j] = n + len(neg_col)
    n_struct = n + len(neg_col)
    m_ub, m_eq = len(A_ub), len(A_eq)
    n_cols = n_struct + m_ub

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for k, (row, b) in enumerate(list(zip(A_ub, b_ub)) + list(zip(A_eq, b_eq))):
        r = [ZERO] * n_cols
        for j, v in enumerate(row):
            v = Fraction(v)
            r[j] = v
            if j in neg_col:
                r[neg_col[j]] = -v
        if k < m_ub:
            r[n_struct + k] = Fraction(1)
        rows.append(r)
        rhs.append(Fraction(b))
    cost = [ZERO] * n_cols
    for j, v in enumerate(c):
        cost[j] = Fraction(v)
        if j in neg_col:
            cost[neg_col[j]] = -Fraction(v)

    status, values = _two_phase(rows, rhs, cost, n_cols)
    if status != "optimal":
        return LPResult(status)
    x = []
    for j in range(n):
        v = values[j]
        if j in neg_col:
            v -= values[neg_col[j]]
        x.append(v)
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), ZERO)
    return LPResult("optimal", tuple(x), value)


def _two_phase(rows, rhs, cost, n_cols):
    m = len(rows)
    # flip rows so that rhs >= 0, then one artificial per row
    T = []
    for r, b in zip(rows, rhs):
        if b < 0:
            r = [-v for v in r]
            b = -b
        art = [ZERO] * m
        T.append(r + art + [b])
    for k in range(m):
        T[k][n_cols + k] = Fraction(1)
    basis = [n_cols + k for k in range(m)]
    total = n_cols + m

    phase1 = [ZERO] * n_cols + [Fraction(-1)] * m
    status = _simplex(T, basis, phase1, range(total))
    if status != "optimal":
        raise LPDefect("phase one cannot be unbounded")
    if _objective(T, basis, phase1) < 0:
        return "infeasible", None

    # drive artificials out of the basis; drop redundant rows
    k = 0
    while k < len(T):
        if basis[k] >= n_cols:
            col = next((j for j in range(n_cols) if T[k][j] != 0), None)
            if col is None:
                del T[k]
                del basis[k]
                continue
            _pivot(T, basis, k, col)
        k += 1
    for r in T:
        del r[n_cols:total]

    status = _simplex(T, basis, cost, range(n_cols))
    if status != "optimal":
        return status, None
    values = [ZERO] * n_cols
    for k, j in enumerate(basis):
        values[j] = T[k][-1]
    return "optimal", values


def _objective(T, basis, cost):
    return sum((cost[j] * T[k][-1] for k, j in enumerate(basis)), ZERO)


def _simplex(T, basis, cost, columns) -> str:
    columns = list(columns)
    while True:
        entering = None
        for j in columns:
            if j in basis:
                continue
            reduced = cost[j] - sum((cost[b] * T[k][j] for k, b in enumerate(basis) if T[k][j]), ZERO)
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        leave = None
        best = None
        for k, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[k] < basis[leave]):
                    best, leave = ratio, k
        if leave is None:
            return "unbounded"
        _pivot(T, basis, leave, entering)


def _pivot(T, basis, k, j):
    row = T[k]
    piv = row[j]
    if piv != 1:
        T[k] = row = [v / piv for v in row]
    for r, other in enumerate(T):
        if r != k and other[j] != 0:
            f = other[j]
            T[r] = [a - f * b for a, b in zip(other, row)]
    basis[k] = j
