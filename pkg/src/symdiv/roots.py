"""Restricted root systems (including the non-reduced BC series), Weyl
groups, chambers and fundamental (co)weights.

Coordinate conventions, fixed once for the whole library:

* a Weight is a tuple of coordinates in the fundamental weight basis
  ``{w_i}`` of the root system;
* a Covector is a tuple of coordinates in the simple coroot basis
  ``{a_i^}``;
* ``pairing(m, v)`` is then the plain coordinate dot product, which makes
  ``pairing(w_i, a_j^) = delta_ij`` literal.

``cartan[i][j] = pairing(alpha_j, alpha_i^)``, so the j-th column of the
Cartan matrix is the weight-coordinate vector of the simple root alpha_j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .geometry import ConeQ, cone_from_halfspaces
from .linalg import Mat, Vec, dot, inverse, mat_vec, qm, qv, unit_vec, vneg, vscale, vsub

Weight = Vec
Covector = Vec

_FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "BC")


@dataclass(frozen=True)
class CartanLabel:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        n = self.rank
        ok = (
            (self.family in ("A", "B", "C", "BC") and n >= 1)
            or (self.family == "D" and n >= 2)
            or (self.family == "E" and n in (6, 7, 8))
            or (self.family == "F" and n == 4)
            or (self.family == "G" and n == 2)
        )
        if not ok:
            raise ValueError(f"invalid rank {n} for family {self.family}")

    def __str__(self):
        return f"{self.family}{self.rank}"


def _factor_cartan(label: CartanLabel) -> tuple[list[list[int]], list[Fraction]]:
    """Cartan matrix and root-length symmetrizer d_i = (a_i, a_i)/2."""
    n = label.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def chain():
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1

    fam = label.family
    if fam == "A":
        chain()
        d = [Fraction(1)] * n
    elif fam in ("B", "BC"):
        chain()
        if n >= 2:
            a[n - 1][n - 2] = -2
        # BC normalization: multipliable short root has (a,a) = 2
        short = Fraction(1) if fam == "BC" else Fraction(1, 2)
        d = [2 * short] * (n - 1) + [short]
    elif fam == "C":
        chain()
        if n >= 2:
            a[n - 2][n - 1] = -2
        d = [Fraction(1)] * (n - 1) + [Fraction(2)]
    elif fam == "D":
        for i in range(n - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        if n >= 3:
            a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        else:  # D2 = A1 x A1
            a[0][1] = a[1][0] = 0
        d = [Fraction(1)] * n
    elif fam == "E":
        # Bourbaki numbering: node 2 attaches to node 4
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, n)]
        for i, j in edges:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        d = [Fraction(1)] * n
    elif fam == "F":
        chain()
        a[1][2], a[2][1] = -1, -2
        d = [Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 2)]
    elif fam == "G":
        a[0][1], a[1][0] = -1, -3
        d = [Fraction(3), Fraction(1)]
    else:  # pragma: no cover
        raise AssertionError(fam)
    return a, d


def _weyl_order(label: CartanLabel) -> int:
    n = label.rank
    if label.family == "A":
        return factorial(n + 1)
    if label.family in ("B", "C", "BC"):
        return 2**n * factorial(n)
    if label.family == "D":
        return 2 ** (n - 1) * factorial(n)
    return {("G", 2): 12, ("F", 4): 1152, ("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600}[
        (label.family, n)
    ]


@dataclass(frozen=True)
class RestrictedRootSystem:
    """Possibly non-reduced root system given by block-diagonal Cartan data.

    ``roots`` are all roots in weight coordinates; for BC factors this
    includes the doubled short roots.  ``multipliable`` lists the simple
    root indices i with 2*alpha_i again a root.
    """

    factors: tuple[CartanLabel, ...]
    cartan: Mat
    gram: Mat
    roots: tuple[Weight, ...]
    multipliable: frozenset[int]

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def simple_root(self, i: int) -> Weight:
        return tuple(self.cartan[k][i] for k in range(self.rank))

    def simple_roots(self) -> tuple[Weight, ...]:
        return tuple(self.simple_root(i) for i in range(self.rank))

    def simple_coroot(self, i: int) -> Covector:
        return unit_vec(i, self.rank)

    def is_root(self, m: Weight) -> bool:
        return tuple(m) in set(self.roots)


def _reduced_roots(cartan: Sequence[Sequence[Fraction]]) -> set[Weight]:
    n = len(cartan)
    simples = [tuple(cartan[k][j] for k in range(n)) for j in range(n)]
    roots: set[Weight] = set(simples)
    frontier = list(roots)
    while frontier:
        beta = frontier.pop()
        for i in range(n):
            new = vsub(beta, vscale(beta[i], simples[i]))
            if new not in roots:
                roots.add(new)
                frontier.append(new)
    return roots


def build_root_system(labels: Iterable[CartanLabel | tuple[str, int]]) -> RestrictedRootSystem:
    labels = tuple(l if isinstance(l, CartanLabel) else CartanLabel(*l) for l in labels)
    if not labels:
        raise ValueError("need at least one factor")
    blocks = [_factor_cartan(l) for l in labels]
    total = sum(l.rank for l in labels)
    cartan = [[Fraction(0)] * total for _ in range(total)]
    d: list[Fraction] = []
    offset = 0
    offsets = []
    for (block, dd), label in zip(blocks, labels):
        offsets.append(offset)
        for i in range(label.rank):
            for j in range(label.rank):
                cartan[offset + i][offset + j] = Fraction(block[i][j])
        d.extend(dd)
        offset += label.rank
    cartan_t = qm(cartan)
    gram = tuple(
        tuple(d[i] * cartan_t[i][j] for j in range(total)) for i in range(total)
    )
    roots = _reduced_roots(cartan_t)
    multipliable: set[int] = set()
    for label, off in zip(labels, offsets):
        if label.family == "BC":
            # doubled roots: twice the (a,a)=2 roots of the reduced B part
            doubles = set()
            for beta in roots:
                if any(beta[k] != 0 for k in range(total) if not off <= k < off + label.rank):
                    continue
                coeffs = _root_coords_in_simples(beta, cartan_t)
                length = sum(
                    coeffs[i] * coeffs[j] * gram[i][j] for i in range(total) for j in range(total)
                )
                if length == 2:
                    doubles.add(vscale(2, beta))
            roots |= doubles
            multipliable.add(off + label.rank - 1)
    rs = RestrictedRootSystem(labels, cartan_t, gram, tuple(sorted(roots)), frozenset(multipliable))
    for i in list(multipliable):
        assert rs.is_root(vscale(2, rs.simple_root(i)))
    return rs


def _root_coords_in_simples(beta: Weight, cartan: Mat) -> Vec:
    from .linalg import solve

    sol = solve(cartan, beta)
    assert sol is not None
    return sol


def pairing(m: Weight, v: Covector) -> Fraction:
    """Dual-basis pairing: the coordinate dot product."""
    return dot(qv(m), qv(v))


def is_dominant(m: Weight, strict: bool = False) -> bool:
    return all(x > 0 for x in m) if strict else all(x >= 0 for x in m)


def is_antidominant(m: Weight, strict: bool = False) -> bool:
    return all(x < 0 for x in m) if strict else all(x <= 0 for x in m)


def reflect_weight(rs: RestrictedRootSystem, i: int, m: Weight) -> Weight:
    return vsub(qv(m), vscale(m[i], rs.simple_root(i)))


def reflect_covector(rs: RestrictedRootSystem, i: int, v: Covector) -> Covector:
    c = dot(rs.simple_root(i), qv(v))
    return vsub(qv(v), vscale(c, rs.simple_coroot(i)))


def weyl_orbit(rs: RestrictedRootSystem, m: Weight) -> set[Weight]:
    m = qv(m)
    seen = {m}
    frontier = [m]
    while frontier:
        x = frontier.pop()
        for i in range(rs.rank):
            y = reflect_weight(rs, i, x)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


@dataclass(frozen=True)
class WeylGroup:
    """Fully enumerated Weyl group acting on weight coordinates."""

    generators: tuple[Mat, ...]
    elements: tuple[Mat, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def _weight_reflection_matrix(rs: RestrictedRootSystem, i: int) -> Mat:
    n = rs.rank
    cols = [reflect_weight(rs, i, unit_vec(j, n)) for j in range(n)]
    return tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))


def _covector_reflection_matrix(rs: RestrictedRootSystem, i: int) -> Mat:
    n = rs.rank
    cols = [reflect_covector(rs, i, unit_vec(j, n)) for j in range(n)]
    return tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))


@lru_cache(maxsize=None)
def weyl_group(rs: RestrictedRootSystem) -> WeylGroup:
    """Enumerate W by closing the simple reflections under products."""
    gens = tuple(_weight_reflection_matrix(rs, i) for i in range(rs.rank))
    from .linalg import identity_mat, mat_mul

    elements = {identity_mat(rs.rank)}
    frontier = [identity_mat(rs.rank)]
    while frontier:
        w = frontier.pop()
        for g in gens:
            x = mat_mul(g, w)
            if x not in elements:
                elements.add(x)
                frontier.append(x)
    expected = 1
    for label in rs.factors:
        expected *= _weyl_order(label)
    assert len(elements) == expected, f"Weyl order {len(elements)} != {expected}"
    return WeylGroup(gens, tuple(sorted(elements)))


@lru_cache(maxsize=None)
def covector_weyl_elements(rs: RestrictedRootSystem) -> tuple[Mat, ...]:
    """The same group acting on covector coordinates (dual action)."""
    gens = tuple(_covector_reflection_matrix(rs, i) for i in range(rs.rank))
    from .linalg import identity_mat, mat_mul

    elements = {identity_mat(rs.rank)}
    frontier = [identity_mat(rs.rank)]
    while frontier:
        w = frontier.pop()
        for g in gens:
            x = mat_mul(g, w)
            if x not in elements:
                elements.add(x)
                frontier.append(x)
    return tuple(sorted(elements))


def irreducible_factors(rs: RestrictedRootSystem) -> list[frozenset[int]]:
    """Connected components of the Coxeter diagram, as index sets."""
    n = rs.rank
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            i = frontier.pop()
            for j in range(n):
                if j not in comp and rs.cartan[i][j] != 0:
                    comp.add(j)
                    frontier.append(j)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def negative_chamber(rs: RestrictedRootSystem) -> ConeQ:
    """{v : pairing(alpha_i, v) <= 0 for all i} in covector coordinates."""
    normals = [vneg(rs.simple_root(i)) for i in range(rs.rank)]
    return cone_from_halfspaces(normals, ambient_dim=rs.rank)


def positive_chamber_weights(rs: RestrictedRootSystem) -> ConeQ:
    """Dominant weights {m : m_i >= 0} in weight coordinates."""
    return cone_from_halfspaces([unit_vec(i, rs.rank) for i in range(rs.rank)], ambient_dim=rs.rank)


def fundamental_coweights(rs: RestrictedRootSystem) -> list[Covector]:
    """Dual basis to the simple roots: pairing(alpha_i, w_j^) = delta_ij."""
    inv = inverse(rs.cartan)
    return [tuple(inv[j]) for j in range(rs.rank)]
