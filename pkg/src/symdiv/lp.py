"""Exact rational linear programming (two-phase simplex, Bland's rule).

Small and deliberately unoptimized: the callers solve desk-scale systems
(tens of variables).  All arithmetic is ``Fraction``; there is no tolerance
anywhere, so "optimal value > 0" is a meaningful exact statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Vec, qv

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None
    x: Vec | None


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            f = tab[i][col]
            tab[i] = [x - f * y for x, y in zip(tab[i], tab[row])]
    basis[row] = col


def _run_simplex(tab: list[list[Fraction]], basis: list[int], ncols: int) -> str:
    """Minimize the objective stored in the last tableau row (Bland's rule)."""
    obj = len(tab) - 1
    while True:
        col = next((j for j in range(ncols) if tab[obj][j] < 0), None)
        if col is None:
            return OPTIMAL
        best_row, best_ratio = None, None
        for i in range(obj):
            if tab[i][col] > 0:
                ratio = tab[i][-1] / tab[i][col]
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[best_row]
                ):
                    best_row, best_ratio = i, ratio
        if best_row is None:
            return UNBOUNDED
        _pivot(tab, basis, best_row, col)


def lp_maximize(
    c: Sequence,
    a_ge: Sequence[Sequence] = (),
    b_ge: Sequence = (),
    a_le: Sequence[Sequence] = (),
    b_le: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximize c.x over free variables subject to the given constraints."""
    c = qv(c)
    n = len(c)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    kinds: list[int] = []  # -1 surplus, +1 slack, 0 none
    for a, b in zip(a_ge, b_ge):
        rows.append(list(qv(a)))
        rhs.append(Fraction(b))
        kinds.append(-1)
    for a, b in zip(a_le, b_le):
        rows.append(list(qv(a)))
        rhs.append(Fraction(b))
        kinds.append(1)
    for a, b in zip(a_eq, b_eq):
        rows.append(list(qv(a)))
        rhs.append(Fraction(b))
        kinds.append(0)
    m = len(rows)
    # columns: x+ (n), x- (n), slack/surplus (m, some unused), artificial (m)
    nx = 2 * n
    ns = m
    ncols = nx + ns + m
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(0)] * (ncols + 1)
        for j in range(n):
            row[j] = rows[i][j]
            row[n + j] = -rows[i][j]
        if kinds[i] != 0:
            row[nx + i] = Fraction(kinds[i])
        row[-1] = rhs[i]
        if row[-1] < 0:
            row = [-x for x in row]
        row[nx + ns + i] = Fraction(1)
        tab.append(row)
    basis = [nx + ns + i for i in range(m)]
    # phase 1: minimize sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(nx + ns, ncols):
        obj[j] = Fraction(1)
    tab.append(obj)
    for i in range(m):
        tab[-1] = [x - y for x, y in zip(tab[-1], tab[i])]
    status = _run_simplex(tab, basis, ncols)
    if status != OPTIMAL or -tab[-1][-1] != 0:
        return LPResult(INFEASIBLE, None, None)
    tab.pop()
    # drive artificials out of the basis; drop redundant rows
    keep: list[int] = []
    for i in range(m):
        if basis[i] >= nx + ns:
            col = next((j for j in range(nx + ns) if tab[i][j] != 0), None)
            if col is None:
                continue  # 0 = 0 row
            _pivot(tab, basis, i, col)
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]
    ncols = nx + ns
    tab = [row[: nx + ns] + [row[-1]] for row in tab]
    # phase 2: minimize -c.x
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        obj[j] = -c[j]
        obj[n + j] = c[j]
    tab.append(obj)
    for i, bcol in enumerate(basis):
        if tab[-1][bcol] != 0:
            f = tab[-1][bcol]
            tab[-1] = [x - f * y for x, y in zip(tab[-1], tab[i])]
    status = _run_simplex(tab, basis, ncols)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    xfull = [Fraction(0)] * ncols
    for i, bcol in enumerate(basis):
        xfull[bcol] = tab[i][-1]
    x = tuple(xfull[j] - xfull[n + j] for j in range(n))
    # the reduced objective row minimizes -c.x, whose tableau constant is c.x
    return LPResult(OPTIMAL, tab[-1][-1], x)


def feasible(a_ge=(), b_ge=(), a_eq=(), b_eq=(), n: int | None = None) -> Vec | None:
    """A point of {x : a_ge x >= b_ge, a_eq x = b_eq}, or None."""
    if n is None:
        n = len(a_ge[0]) if a_ge else len(a_eq[0])
    res = lp_maximize([0] * n, a_ge=a_ge, b_ge=b_ge, a_eq=a_eq, b_eq=b_eq)
    return res.x if res.status == OPTIMAL else None


def strict_feasible_point(
    a_ge: Sequence[Sequence],
    b_ge: Sequence,
    strict: Sequence[int],
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> Vec | None:
    """A point satisfying the ``strict`` rows strictly, the others weakly.

    Maximizes the margin t of the strict rows (capped at 1); a positive
    optimum certifies strict feasibility exactly.
    """
    if not a_ge and not a_eq:
        raise ValueError("no constraints")
    n = len(a_ge[0]) if a_ge else len(a_eq[0])
    strict = set(strict)
    ge_rows, ge_rhs = [], []
    for i, (a, b) in enumerate(zip(a_ge, b_ge)):
        t_coeff = -1 if i in strict else 0
        ge_rows.append(list(a) + [t_coeff])
        ge_rhs.append(b)
    eq_rows = [list(a) + [0] for a in a_eq]
    c = [0] * n + [1]
    res = lp_maximize(
        c,
        a_ge=ge_rows,
        b_ge=ge_rhs,
        a_le=[[0] * n + [1]],
        b_le=[1],
        a_eq=eq_rows,
        b_eq=list(b_eq),
    )
    if res.status != OPTIMAL or res.value <= 0:
        return None
    return res.x[:n]
