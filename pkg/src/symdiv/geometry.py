"""Exact rational polyhedral geometry: cones, polytopes, volumes, lattice
points, pushing triangulations.

Everything is exact (``Fraction``); there is no tolerance parameter anywhere.
V- and H-representations are computed eagerly and canonically, so two objects
describing the same set compare equal.  All values are immutable and all
operations pure.

Scale: the enumeration kernel is combinatorial (subset enumeration over
constraints), which is entirely adequate for the desk-scale ambient
dimensions this library targets (rank <= 4 or so).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, floor
from typing import Iterable, Sequence

from .linalg import (
    Mat,
    Vec,
    dot,
    identity_mat,
    inverse,
    is_zero,
    kernel_basis,
    lattice_basis_in_subspace,
    primitive,
    qv,
    rank,
    reduce_mod_rows,
    rref,
    unit_vec,
    vadd,
    vneg,
    vscale,
    vsub,
    zero_vec,
)
from .linalg import det as _det
from .linalg import solve as _solve


class UnboundedError(ValueError):
    """Raised when a polytope constructor meets an unbounded polyhedron."""


# ---------------------------------------------------------------------------
# linear systems


@dataclass(frozen=True)
class LinearSolution:
    """Affine solution set of an exact linear system."""

    particular: Vec
    kernel: tuple[Vec, ...]


def solve_exact(a: Sequence[Sequence], b: Sequence) -> LinearSolution | None:
    """Exact solution set of a x = b over Q, or None when infeasible."""
    a = tuple(qv(row) for row in a)
    b = qv(b)
    if len(a) != len(b):
        raise ValueError(f"matrix has {len(a)} rows but rhs has {len(b)}")
    ncols = len(a[0]) if a else 0
    if any(len(row) != ncols for row in a):
        raise ValueError("ragged matrix")
    part = _solve(a, b)
    if part is None:
        return None
    return LinearSolution(part, tuple(kernel_basis(a, ncols)))


def affine_rank(points: Sequence[Vec]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    p0 = points[0]
    return rank([vsub(p, p0) for p in points[1:]])


# ---------------------------------------------------------------------------
# the enumeration core


def _canonical_lineality(vecs: Sequence[Vec]) -> tuple[Vec, ...]:
    red, _ = rref(vecs)
    return tuple(primitive(tuple(row)) for row in red)


def _extreme_rays(
    eqs: Sequence[Vec], ineqs: Sequence[Vec], dim: int
) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """V-representation of {x : eqs.x = 0, ineqs.x >= 0}.

    Returns (lineality basis, extreme rays), both canonical.  Extreme rays
    are found by enumerating minimal active sets: a face of dimension
    dim(lineality)+1 is cut out by a subset of constraints of the right
    rank, and feasibility of a spanning vector decides its orientation.
    """
    eqs = [qv(e) for e in eqs]
    ineqs = [qv(h) for h in ineqs]
    lin = kernel_basis(eqs + ineqs, dim)
    sub_dim = dim - rank(eqs) if eqs else dim
    l = len(lin)
    if sub_dim == l:
        return _canonical_lineality(lin), ()
    lin_red, lin_piv = rref(lin)
    k = sub_dim - l - 1
    rays: set[Vec] = set()
    for subset in itertools.combinations(range(len(ineqs)), k):
        stack = eqs + [ineqs[i] for i in subset]
        null = kernel_basis(stack, dim)
        if len(null) != l + 1:
            continue
        v = None
        for cand in null:
            red = reduce_mod_rows(cand, lin_red, lin_piv)
            if not is_zero(red):
                v = red
                break
        if v is None:
            continue
        vals = [dot(h, v) for h in ineqs]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            v = vneg(v)
        else:
            continue
        rays.add(primitive(v))
    return _canonical_lineality(lin), tuple(sorted(rays))


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class ConeQ:
    """Rational polyhedral cone with canonical V- and H-representations.

    ``rays`` are the primitive extreme rays (empty for a subspace),
    ``lineality`` a canonical basis of the largest subspace contained in the
    cone.  ``facets`` and ``equations`` are the irredundant H-representation:
    {x : f.x >= 0 for f in facets, e.x = 0 for e in equations}.
    """

    ambient_dim: int
    rays: tuple[Vec, ...]
    lineality: tuple[Vec, ...]
    facets: tuple[Vec, ...]
    equations: tuple[Vec, ...]

    def dim(self) -> int:
        return rank(list(self.rays) + list(self.lineality))

    def is_strictly_convex(self) -> bool:
        return not self.lineality

    def generators(self) -> tuple[Vec, ...]:
        gens = list(self.rays)
        for l in self.lineality:
            gens.extend((l, vneg(l)))
        return tuple(gens)

    def is_zero(self) -> bool:
        return not self.rays and not self.lineality


def _make_cone(gens: Sequence[Vec], lins: Sequence[Vec], dim: int) -> ConeQ:
    dlin, drays = _extreme_rays(eqs=list(lins), ineqs=list(gens), dim=dim)
    equations, facets = dlin, drays
    vlin, vrays = _extreme_rays(eqs=list(equations), ineqs=list(facets), dim=dim)
    return ConeQ(dim, vrays, vlin, facets, equations)


def cone_from_generators(gens: Iterable[Sequence], ambient_dim: int | None = None) -> ConeQ:
    gens = [qv(g) for g in gens]
    if ambient_dim is None:
        if not gens:
            raise ValueError("need ambient_dim for a cone without generators")
        ambient_dim = len(gens[0])
    if any(len(g) != ambient_dim for g in gens):
        raise ValueError("generator dimension mismatch")
    return _make_cone([g for g in gens if not is_zero(g)], [], ambient_dim)


def cone_from_halfspaces(
    ineqs: Iterable[Sequence], eqs: Iterable[Sequence] = (), ambient_dim: int | None = None
) -> ConeQ:
    ineqs = [qv(h) for h in ineqs]
    eqs = [qv(e) for e in eqs]
    if ambient_dim is None:
        pool = ineqs + eqs
        if not pool:
            raise ValueError("need ambient_dim for an unconstrained cone")
        ambient_dim = len(pool[0])
    lin, rays = _extreme_rays(eqs, ineqs, ambient_dim)
    return _make_cone(list(rays), list(lin), ambient_dim)


def dual_cone(c: ConeQ) -> ConeQ:
    """{v : g.v >= 0 for all generators g of c}."""
    return _make_cone(list(c.facets), list(c.equations), c.ambient_dim)


def cone_contains(c: ConeQ, v: Sequence, mode: str = "closed") -> bool:
    """Exact membership; 'relative_interior' tests the facet inequalities
    strictly (facets never contain the cone's span, so this is relint)."""
    v = qv(v)
    if len(v) != c.ambient_dim:
        raise ValueError("dimension mismatch")
    if any(dot(e, v) != 0 for e in c.equations):
        return False
    if mode == "closed":
        return all(dot(f, v) >= 0 for f in c.facets)
    if mode == "relative_interior":
        return all(dot(f, v) > 0 for f in c.facets)
    raise ValueError(f"unknown mode {mode!r}")


def intersect_cones(c1: ConeQ, c2: ConeQ) -> ConeQ:
    if c1.ambient_dim != c2.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return cone_from_halfspaces(
        list(c1.facets) + list(c2.facets),
        list(c1.equations) + list(c2.equations),
        c1.ambient_dim,
    )


def cone_le(c1: ConeQ, c2: ConeQ) -> bool:
    """c1 subseteq c2, checked on generators."""
    return all(cone_contains(c2, g) for g in c1.generators()) if not c1.is_zero() else True


def is_simplicial_cone(c: ConeQ) -> bool:
    return not c.lineality and len(c.rays) == c.dim()


def relative_interior_point(c: ConeQ) -> Vec:
    """Sum of the extreme rays (and nothing else) lies in the relative
    interior of a strictly convex cone; subspace summands are added for
    cones with lineality."""
    if c.is_zero():
        return zero_vec(c.ambient_dim)
    acc = zero_vec(c.ambient_dim)
    for r in c.rays:
        acc = vadd(acc, r)
    if is_zero(acc) and c.lineality:
        # pure subspace: 0 is already relative-interior
        return acc
    return acc


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class PolytopeQ:
    """Bounded rational polytope with canonical V- and H-representations.

    ``halfspaces`` are (normal a, offset b) meaning a.x >= b; affine-hull
    equations appear as two opposite halfspaces.  The empty polytope has no
    vertices and the single infeasible constraint 0 >= 1.
    """

    ambient_dim: int
    vertices: tuple[Vec, ...]
    halfspaces: tuple[tuple[Vec, Fraction], ...]

    def is_empty(self) -> bool:
        return not self.vertices

    def dim(self) -> int:
        return affine_rank(self.vertices)

    def contains(self, x: Sequence) -> bool:
        x = qv(x)
        return bool(self.vertices) and all(dot(a, x) >= b for a, b in self.halfspaces)

    def facet_vertices(self, a: Vec, b: Fraction) -> tuple[Vec, ...]:
        return tuple(v for v in self.vertices if dot(a, v) == b)


def _empty_polytope(dim: int) -> PolytopeQ:
    return PolytopeQ(dim, (), ((zero_vec(dim), Fraction(1)),))


def convex_hull(points: Iterable[Sequence]) -> PolytopeQ:
    """Irredundant V-rep and valid H-rep of the convex hull."""
    pts = [qv(p) for p in points]
    if not pts:
        raise ValueError("convex hull of an empty point set")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ValueError("point dimension mismatch")
    gens = [(Fraction(1),) + p for p in pts]
    hom = _make_cone(gens, [], dim + 1)
    halfspaces: list[tuple[Vec, Fraction]] = []
    for f in hom.facets:
        a, b = f[1:], -f[0]
        if not is_zero(a):
            halfspaces.append((a, b))
    for e in hom.equations:
        a, b = e[1:], -e[0]
        if not is_zero(a):
            halfspaces.append((a, b))
            halfspaces.append((vneg(a), -b))
    vertices = []
    for r in hom.rays:
        if r[0] <= 0:
            raise AssertionError("homogenization produced a recession ray")
        vertices.append(vscale(1 / r[0], r[1:]))
    return PolytopeQ(dim, tuple(sorted(vertices)), tuple(sorted(halfspaces)))


def polytope_from_halfspaces(
    halfspaces: Iterable[tuple[Sequence, object]], ambient_dim: int
) -> PolytopeQ:
    """Polytope {x : a.x >= b}; raises UnboundedError on unbounded input."""
    hs = [(qv(a), Fraction(b)) for a, b in halfspaces]
    hom_ineqs = [(-b,) + a for a, b in hs]
    hom_ineqs.append(unit_vec(0, ambient_dim + 1))  # t >= 0
    lin, rays = _extreme_rays([], hom_ineqs, ambient_dim + 1)
    verts = [vscale(1 / r[0], r[1:]) for r in rays if r[0] > 0]
    if not verts:
        return _empty_polytope(ambient_dim)
    recession = [r[1:] for r in rays if r[0] == 0] + [l[1:] for l in lin]
    recession = [r for r in recession if not is_zero(r)]
    if recession:
        raise UnboundedError(f"unbounded polyhedron; recession direction {recession[0]}")
    return convex_hull(verts)


def polytope_equal(p: PolytopeQ, q: PolytopeQ) -> bool:
    return p.vertices == q.vertices and p.ambient_dim == q.ambient_dim


def intersect_polytopes(p: PolytopeQ, q: PolytopeQ) -> PolytopeQ:
    if p.is_empty() or q.is_empty():
        return _empty_polytope(p.ambient_dim)
    return polytope_from_halfspaces(list(p.halfspaces) + list(q.halfspaces), p.ambient_dim)


# ---------------------------------------------------------------------------
# volume and lattice points


def _affine_projection(points: Sequence[Vec]) -> list[int]:
    """Coordinate subset on which the affine hull of the points projects
    isomorphically (pivot columns of the direction space)."""
    p0 = points[0]
    dirs = [vsub(p, p0) for p in points[1:]]
    _, pivots = rref(dirs)
    return pivots


def _proj(p: Vec, cols: Sequence[int]) -> Vec:
    return tuple(p[c] for c in cols)


def _triangulate_vertex_set(points: Sequence[Vec]) -> list[tuple[int, ...]]:
    """Fan triangulation (cone from the lex-min vertex over far facets);
    input must be the vertex set of its own hull.  Returns index tuples."""
    idx = list(range(len(points)))

    def go(indices: list[int]) -> list[tuple[int, ...]]:
        pts = [points[i] for i in indices]
        k = affine_rank(pts)
        if len(indices) == k + 1:
            return [tuple(sorted(indices))]
        cols = _affine_projection(pts)
        local = {i: _proj(points[i], cols) for i in indices}
        hull = convex_hull([local[i] for i in indices])
        i0 = min(indices, key=lambda i: points[i])
        out: list[tuple[int, ...]] = []
        seen_eq = set()
        for a, b in hull.halfspaces:
            if (vneg(a), -b) in seen_eq:
                continue
            seen_eq.add((a, b))
            if dot(a, local[i0]) > b:
                face = [i for i in indices if dot(a, local[i]) == b]
                for simplex in go(face):
                    out.append(tuple(sorted(simplex + (i0,))))
        return out

    return go(idx)


def _simplex_volume(points: Sequence[Vec]) -> Fraction:
    p0 = points[0]
    m = [vsub(p, p0) for p in points[1:]]
    return abs(_det(m)) / factorial(len(m))


def polytope_volume(p: PolytopeQ, lattice_basis: Sequence[Sequence]) -> Fraction:
    """Exact volume, normalized so the fundamental cell of the lattice has
    volume 1.  Lower-dimensional polytopes have ambient volume 0."""
    basis = tuple(qv(row) for row in lattice_basis)
    cell = abs(_det(basis))
    if cell == 0:
        raise ValueError("singular lattice basis")
    if p.is_empty() or p.dim() < p.ambient_dim:
        return Fraction(0)
    total = Fraction(0)
    for simplex in _triangulate_vertex_set(p.vertices):
        total += _simplex_volume([p.vertices[i] for i in simplex])
    return total / cell


def relative_volume(p: PolytopeQ, lattice_basis: Sequence[Sequence]) -> Fraction:
    """Volume inside Aff(p), normalized by the induced sublattice of the
    direction space (lattice of the lattice_basis).  Points have volume 1."""
    if p.is_empty():
        return Fraction(0)
    k = p.dim()
    if k == 0:
        return Fraction(1)
    if k == p.ambient_dim:
        return polytope_volume(p, lattice_basis)
    basis = tuple(qv(row) for row in lattice_basis)
    binv = inverse(basis)
    bt = tuple(zip(*binv))  # columns of inverse as rows: z-coords map
    p0 = p.vertices[0]
    dirs_z = [tuple(dot(tuple(col), vsub(v, p0)) for col in bt) for v in p.vertices[1:]]
    sub = lattice_basis_in_subspace(dirs_z, p.ambient_dim)
    if len(sub) != k:
        raise ValueError("polytope directions do not span a rational subspace of its dimension")
    coords = []
    for v in p.vertices:
        z = tuple(dot(tuple(col), vsub(v, p0)) for col in bt)
        c = _solve(tuple(zip(*sub)), z)
        if c is None:
            raise ValueError("vertex outside the rational span of the lattice slice")
        coords.append(c)
    hull = convex_hull(coords)
    total = Fraction(0)
    for simplex in _triangulate_vertex_set(hull.vertices):
        total += _simplex_volume([hull.vertices[i] for i in simplex])
    return total


def _fm_integer_points(rows: list[Vec], rhs: list[Fraction], nvars: int) -> list[tuple[int, ...]]:
    """All integer points of {z : rows.z >= rhs} by Fourier-Motzkin bounds."""
    if nvars == 0:
        return [()] if all(0 >= b for b in rhs) else []
    passed_rows, passed_rhs = [], []
    pos, neg = [], []
    for a, b in zip(rows, rhs):
        c = a[nvars - 1]
        if c == 0:
            passed_rows.append(a)
            passed_rhs.append(b)
        elif c > 0:
            pos.append((a, b))
        else:
            neg.append((a, b))
    for (ai, bi), (aj, bj) in itertools.product(pos, neg):
        ci, cj = ai[nvars - 1], aj[nvars - 1]
        new_a = vadd(vscale(-cj, ai), vscale(ci, aj))
        new_b = -cj * bi + ci * bj
        passed_rows.append(new_a)
        passed_rhs.append(new_b)
    out = []
    for prefix in _fm_integer_points(passed_rows, passed_rhs, nvars - 1):
        lo, hi = None, None
        pref = tuple(Fraction(x) for x in prefix)
        for a, b in pos:
            rest = sum((a[i] * pref[i] for i in range(nvars - 1)), Fraction(0))
            bound = (b - rest) / a[nvars - 1]
            lo = bound if lo is None or bound > lo else lo
        for a, b in neg:
            rest = sum((a[i] * pref[i] for i in range(nvars - 1)), Fraction(0))
            bound = (b - rest) / a[nvars - 1]
            hi = bound if hi is None or bound < hi else hi
        if lo is None or hi is None:
            raise UnboundedError("unbounded direction during lattice point enumeration")
        for z in range(ceil(lo), floor(hi) + 1):
            out.append(prefix + (z,))
    return out


def lattice_points(p: PolytopeQ, lattice_basis: Sequence[Sequence]) -> list[Vec]:
    """Exactly the lattice points {z.B : z integral} inside p."""
    if p.is_empty():
        return []
    basis = tuple(qv(row) for row in lattice_basis)
    if abs(_det(basis)) == 0:
        raise ValueError("singular lattice basis")
    rows, rhs = [], []
    for a, b in p.halfspaces:
        rows.append(tuple(dot(a, bi) for bi in basis))
        rhs.append(b)
    pts = []
    for z in _fm_integer_points(rows, rhs, p.ambient_dim):
        x = zero_vec(p.ambient_dim)
        for zi, bi in zip(z, basis):
            x = vadd(x, vscale(zi, bi))
        pts.append(x)
    return sorted(pts)


def polar_polytope(p: PolytopeQ) -> PolytopeQ:
    """{n : m.n >= -1 for all m in p}; requires 0 in the interior of p."""
    if p.is_empty() or p.dim() < p.ambient_dim:
        raise ValueError("polar polytope needs a full-dimensional polytope")
    if not all(b < 0 for _, b in p.halfspaces):
        raise ValueError("0 is not in the interior of the polytope")
    return polytope_from_halfspaces([(v, Fraction(-1)) for v in p.vertices], p.ambient_dim)


# ---------------------------------------------------------------------------
# pushing triangulations


@dataclass(frozen=True)
class Triangulation:
    """Simplices indexed into ``points`` (the accepted pushing order)."""

    parent: PolytopeQ
    points: tuple[Vec, ...]
    simplices: tuple[tuple[int, ...], ...]

    def simplex_points(self, i: int) -> tuple[Vec, ...]:
        return tuple(self.points[j] for j in self.simplices[i])


def push_triangulate(p: PolytopeQ, vertex_order: Sequence[Sequence]) -> Triangulation:
    """Triangulation of p obtained by pushing the points in the given order.

    The order must contain every vertex of p; extra points (inside p) are
    allowed and are simply pushed too.  Points of the order outside p never
    enter any cell.  Each cell carries the set of order points lying on it;
    pushing v keeps cells without v, keeps pyramids with apex v, and
    otherwise replaces the cell by the hull of the other points plus cones
    from v over its facets visible from v (points on a facet hyperplane are
    not visible).
    """
    pts = [qv(v) for v in vertex_order]
    if p.is_empty():
        raise ValueError("cannot triangulate the empty polytope")
    if len(set(pts)) != len(pts):
        raise ValueError("duplicate points in vertex order")
    inside = [i for i, q in enumerate(pts) if p.contains(q)]
    if not set(p.vertices) <= {pts[i] for i in inside}:
        raise ValueError("vertex order must contain every vertex of the polytope")
    k = p.dim()
    if k == 0:
        i0 = next(i for i in inside if pts[i] == p.vertices[0])
        return Triangulation(p, tuple(pts), ((i0,),))
    cols = _affine_projection(list(p.vertices))
    local = {i: _proj(pts[i], cols) for i in inside}
    cells: list[frozenset[int]] = [frozenset(inside)]
    for v in inside:
        new_cells: list[frozenset[int]] = []
        for cell in cells:
            if v not in cell:
                new_cells.append(cell)
                continue
            others = sorted(cell - {v})
            opts = [local[i] for i in others]
            r = affine_rank(opts)
            if r == k - 1:
                new_cells.append(cell)  # pyramid with apex v
                continue
            if r != k:
                raise AssertionError("pushing produced a degenerate cell")
            hull_o = convex_hull(opts)
            new_cells.append(frozenset(others))
            for a, b in hull_o.halfspaces:
                if dot(a, local[v]) < b:  # strictly on the far side: visible
                    face = frozenset(i for i in others if dot(a, local[i]) == b) | {v}
                    new_cells.append(face)
        cells = new_cells
    simplices = []
    for cell in cells:
        if len(cell) != k + 1 or affine_rank([local[i] for i in cell]) != k:
            raise AssertionError("pushing did not terminate in simplices")
        simplices.append(tuple(sorted(cell)))
    return Triangulation(p, tuple(pts), tuple(sorted(simplices)))


def check_triangulation(tri: Triangulation, lattice_basis: Sequence[Sequence] | None = None) -> list[str]:
    """Verify the subdivision axioms; returns a list of violations.

    Checks: simplices affinely independent with vertices from the order;
    containment in the parent; exact volume additivity (inside Aff(parent));
    pairwise intersections are common faces.
    """
    p = tri.parent
    problems = []
    k = p.dim()
    basis = lattice_basis if lattice_basis is not None else identity_mat(p.ambient_dim)
    cols = _affine_projection(list(p.vertices)) if k > 0 else []
    for s in tri.simplices:
        spts = [tri.points[i] for i in s]
        if affine_rank(spts) != len(s) - 1:
            problems.append(f"degenerate simplex {s}")
        if not all(p.contains(q) for q in spts):
            problems.append(f"simplex {s} leaves the parent")
    total = sum((relative_volume(convex_hull([tri.points[i] for i in s]), basis) for s in tri.simplices), Fraction(0))
    if total != relative_volume(p, basis):
        problems.append(f"volumes sum to {total}, parent has {relative_volume(p, basis)}")
    hulls = {}
    for s in tri.simplices:
        hulls[s] = convex_hull([_proj(tri.points[i], cols) for i in s]) if k else None
    for s, t in itertools.combinations(tri.simplices, 2):
        if k == 0:
            continue
        inter = intersect_polytopes(hulls[s], hulls[t])
        if inter.is_empty():
            continue
        for cell in (s, t):
            h = hulls[cell]
            active = [
                (a, b)
                for a, b in h.halfspaces
                if all(dot(a, w) == b for w in inter.vertices)
            ]
            face_pts = [
                _proj(tri.points[i], cols)
                for i in cell
                if all(dot(a, _proj(tri.points[i], cols)) == b for a, b in active)
            ]
            if sorted(set(face_pts)) != list(inter.vertices):
                problems.append(f"intersection of {s} and {t} is not a face of {cell}")
    return problems


def boundary_simplices(tri: Triangulation) -> list[tuple[int, ...]]:
    """(dim-1)-simplices of the induced triangulation of the proper faces:
    facets of member simplices lying on a facet hyperplane of the parent."""
    p = tri.parent
    eq_seen = set()
    facets = []
    for a, b in p.halfspaces:
        if (vneg(a), -b) in eq_seen:
            continue
        eq_seen.add((a, b))
        facets.append((a, b))
    out = set()
    for s in tri.simplices:
        for drop in s:
            face = tuple(i for i in s if i != drop)
            fpts = [tri.points[i] for i in face]
            for a, b in facets:
                if all(dot(a, q) == b for q in fpts):
                    out.add(face)
                    break
    return sorted(out)
