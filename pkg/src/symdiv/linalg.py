"""Exact linear algebra over the rationals.

Vectors are tuples of ``fractions.Fraction`` and matrices are tuples of row
vectors.  Everything is pure; the polyhedral kernel calls these helpers in
tight enumeration loops, so they stay allocation-light and free of any
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def qv(values: Iterable) -> Vec:
    """Coerce ints / 'p/q' strings / Fractions to an exact vector."""
    return tuple(Fraction(x) for x in values)


def qm(rows: Iterable[Iterable]) -> Mat:
    return tuple(qv(r) for r in rows)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def unit_vec(i: int, n: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def is_zero(v: Vec) -> bool:
    return all(x == 0 for x in v)


def dot(u: Vec, v: Vec) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(v: Vec) -> Vec:
    return tuple(-a for a in v)


def vscale(c, v: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in v)


def vsum(vs: Sequence[Vec], n: int | None = None) -> Vec:
    if not vs:
        if n is None:
            raise ValueError("need dimension for empty sum")
        return zero_vec(n)
    acc = vs[0]
    for v in vs[1:]:
        acc = vadd(acc, v)
    return acc


def identity_mat(n: int) -> Mat:
    return tuple(unit_vec(i, n) for i in range(n))


def transpose(m: Sequence[Vec]) -> Mat:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_vec(m: Sequence[Vec], v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Vec], b: Sequence[Vec]) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def rref(rows: Sequence[Vec]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + [row for row in m[r:] if any(x != 0 for x in row)], pivots


def rank(rows: Sequence[Vec]) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Vec], ncols: int) -> list[Vec]:
    """Basis of {x : rows @ x = 0}."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -red[i][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Vec], b: Vec) -> Vec | None:
    """One particular solution of a @ x = b, or None if inconsistent."""
    if len(a) != len(b):
        raise ValueError("dimension mismatch between matrix and rhs")
    if not a:
        return ()
    ncols = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(tuple(tuple(r) for r in aug))
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    return tuple(x)


def det(m: Sequence[Vec]) -> Fraction:
    n = len(m)
    a = [list(r) for r in m]
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    res = sign
    for i in range(n):
        res *= a[i][i]
    return res


def inverse(m: Sequence[Vec]) -> Mat:
    n = len(m)
    aug = [list(m[i]) + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    red, pivots = rref(tuple(tuple(r) for r in aug))
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def primitive(v: Vec) -> Vec:
    """Scale to an integer vector with content 1, preserving direction."""
    if is_zero(v):
        return v
    denom_lcm = 1
    for x in v:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x, g) for x in ints)


def is_integral(v: Vec) -> bool:
    return all(x.denominator == 1 for x in v)


def reduce_mod_rows(v: Vec, red_rows: Sequence[Sequence[Fraction]], pivots: Sequence[int]) -> Vec:
    """Subtract the span of rref rows from v (canonical coset representative)."""
    x = list(v)
    for row, p in zip(red_rows, pivots):
        if x[p] != 0:
            f = x[p]
            x = [a - f * b for a, b in zip(x, row)]
    return tuple(x)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[Vec]:
    """Basis of {z in Z^n : rows @ z = 0} (saturated by construction).

    Unimodular column reduction; the columns of the transform matrix that hit
    zero columns of the reduced matrix form the kernel basis.
    """
    m = [list(map(int, r)) for r in rows]
    c = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col(j):
        return [m[i][j] for i in range(len(m))]

    active = list(range(ncols))
    for r in range(len(m)):
        live = [j for j in active if m[r][j] != 0]
        if not live:
            continue
        # gcd-reduce the row entries among active columns
        while len([j for j in active if m[r][j] != 0]) > 1:
            live = sorted((j for j in active if m[r][j] != 0), key=lambda j: abs(m[r][j]))
            j0 = live[0]
            for j in live[1:]:
                q = m[r][j] // m[r][j0]
                for i in range(len(m)):
                    m[i][j] -= q * m[i][j0]
                for i in range(ncols):
                    c[i][j] -= q * c[i][j0]
        j0 = next(j for j in active if m[r][j] != 0)
        active.remove(j0)
    kernel = []
    for j in active:
        if all(m[i][j] == 0 for i in range(len(m))):
            kernel.append(tuple(Fraction(c[i][j]) for i in range(ncols)))
    return kernel


def lattice_basis_in_subspace(span_rows: Sequence[Vec], ambient: int) -> list[Vec]:
    """Basis of Z^n intersected with the rational row span of ``span_rows``."""
    if not span_rows:
        return []
    perp = kernel_basis(span_rows, ambient)
    if not perp:
        return [tuple(r) for r in identity_mat(ambient)]
    int_rows = []
    for p in perp:
        p = primitive(p)
        int_rows.append([int(x) for x in p])
    return integer_kernel(int_rows, ambient)


def lex_min(vs: Sequence[Vec]) -> Vec:
    return min(vs)


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
