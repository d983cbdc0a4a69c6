"""Colored cones and fans; the symmetric variety as combinatorial data.

A colored cone is a strictly convex rational cone in covector coordinates
together with a set of colors; a fan is a compatible family of these (only
the maximal cones are stored; faces are induced).  Completeness, toroidality
and Q-factoriality are decided exactly, and the fan surgeries (decoloration,
toric slice, Q-factorialization) produce new fans.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import lp
from .geometry import (
    ConeQ,
    cone_contains,
    cone_from_generators,
    cone_from_halfspaces,
    cone_le,
    intersect_cones,
    is_simplicial_cone,
)
from .linalg import Vec, dot, is_zero, qv, vneg, zero_vec
from .roots import Covector, covector_weyl_elements, negative_chamber
from .spaces import ColorId, SymmetricSpaceData, color_image, valuation_cone


class ConstructionError(RuntimeError):
    """A fan surgery step failed; the message names the failing step."""


@dataclass(frozen=True)
class ColoredCone:
    cone: ConeQ
    colors: frozenset[ColorId]

    def sort_key(self):
        return (self.cone.rays, self.cone.lineality, sorted(c.label() for c in self.colors))


@dataclass(frozen=True)
class ColoredFan:
    space: SymmetricSpaceData
    maximal_cones: tuple[ColoredCone, ...]


def colored_cone(space: SymmetricSpaceData, rays: Iterable[Sequence], colors: Iterable[ColorId | str] = ()) -> ColoredCone:
    cids = frozenset(ColorId.parse(c) if isinstance(c, str) else c for c in colors)
    return ColoredCone(cone_from_generators([qv(r) for r in rays], space.rank), cids)


def make_fan(space: SymmetricSpaceData, cones: Iterable[tuple[Iterable[Sequence], Iterable]]) -> ColoredFan:
    ccs = [colored_cone(space, rays, colors) for rays, colors in cones]
    return ColoredFan(space, tuple(sorted(ccs, key=ColoredCone.sort_key)))


class SymVariety:
    """A symmetric variety, determined by its colored fan; the standard
    predicates are computed once and cached."""

    def __init__(self, fan: ColoredFan):
        self.fan = fan

    def __eq__(self, other):
        return isinstance(other, SymVariety) and self.fan == other.fan

    def __hash__(self):
        return hash(self.fan)

    @property
    def space(self) -> SymmetricSpaceData:
        return self.fan.space

    @cached_property
    def complete(self) -> bool:
        return is_complete(self.fan)

    @cached_property
    def toroidal(self) -> bool:
        return is_toroidal(self.fan)

    @cached_property
    def qfactorial(self) -> bool:
        return is_qfactorial(self.fan)


# ---------------------------------------------------------------------------
# strict feasibility on cones


def _relint_meets(cones: Sequence[ConeQ], inside: ConeQ | None = None) -> bool:
    """Do the relative interiors of all ``cones`` meet simultaneously,
    within ``inside`` (closed) if given?"""
    dim = cones[0].ambient_dim
    a_ge: list[Vec] = []
    strict: list[int] = []
    a_eq: list[Vec] = []
    for c in cones:
        for f in c.facets:
            strict.append(len(a_ge))
            a_ge.append(f)
        a_eq.extend(c.equations)
    if inside is not None:
        a_ge.extend(inside.facets)
        a_eq.extend(inside.equations)
    if not a_ge and not a_eq:
        return True
    pt = lp.strict_feasible_point(a_ge, [0] * len(a_ge), strict, a_eq, [0] * len(a_eq))
    return pt is not None


# ---------------------------------------------------------------------------
# validation and predicates


def validate_fan(fan: ColoredFan) -> list[str]:
    """Check the colored-cone and fan axioms; returns violations."""
    space = fan.space
    problems: list[str] = []
    cm = negative_chamber(space.roots)
    for idx, cc in enumerate(fan.maximal_cones):
        tag = f"cone {idx}"
        if not cc.cone.is_strictly_convex():
            problems.append(f"{tag}: not strictly convex")
            continue
        for c in cc.colors:
            if not space.has_color(c):
                problems.append(f"{tag}: unknown color {c.label()}")
        if not _relint_meets([cc.cone], inside=cm):
            problems.append(f"{tag}: relative interior misses the valuation cone")
        gens = [color_image(space, c) for c in cc.colors if space.has_color(c)]
        gens.extend(intersect_cones(cc.cone, cm).generators())
        if gens:
            regen = cone_from_generators(gens, space.rank)
            if regen != cc.cone:
                problems.append(
                    f"{tag}: not generated by its colors and valuation-cone points"
                )
        else:
            problems.append(f"{tag}: no generators inside the valuation cone")
    for i, j in itertools.combinations(range(len(fan.maximal_cones)), 2):
        ci, cj = fan.maximal_cones[i], fan.maximal_cones[j]
        if ci.cone == cj.cone:
            problems.append(f"cones {i} and {j} coincide")
            continue
        if cone_le(ci.cone, cj.cone) or cone_le(cj.cone, ci.cone):
            problems.append(f"cones {i} and {j} are nested (face listed as maximal)")
            continue
        if _relint_meets([ci.cone, cj.cone], inside=cm):
            problems.append(
                f"cones {i} and {j}: relative interiors overlap inside the valuation cone"
            )
    return problems


def is_toroidal(fan: ColoredFan) -> bool:
    return all(not cc.colors for cc in fan.maximal_cones)


def _covers(target: ConeQ, cones: Sequence[ConeQ]) -> bool:
    """Exact test: is the (full-dimensional, strictly convex) target cone
    contained in the union?  Splits the target along member hyperplanes."""
    for c in cones:
        if cone_le(target, c):
            return True
    gens = target.generators()
    for c in cones:
        for h in c.facets:
            if any(dot(h, g) > 0 for g in gens) and any(dot(h, g) < 0 for g in gens):
                upper = cone_from_halfspaces(list(target.facets) + [h], target.equations, target.ambient_dim)
                lower = cone_from_halfspaces(list(target.facets) + [vneg(h)], target.equations, target.ambient_dim)
                return _covers(upper, cones) and _covers(lower, cones)
    return False


def is_complete(fan: ColoredFan) -> bool:
    """The valuation cone must be contained in the support."""
    if not fan.maximal_cones:
        return False
    cm = negative_chamber(fan.space.roots)
    return _covers(cm, [cc.cone for cc in fan.maximal_cones])


def is_qfactorial(fan: ColoredFan) -> bool:
    """Every cone simplicial, and distinct fan colors have distinct images."""
    if not all(is_simplicial_cone(cc.cone) for cc in fan.maximal_cones):
        return False
    used: set[ColorId] = set()
    for cc in fan.maximal_cones:
        used |= cc.colors
    roots_seen: set[int] = set()
    for c in used:
        if c.root_index in roots_seen:
            return False
        roots_seen.add(c.root_index)
    return True


@dataclass(frozen=True)
class GStableRay:
    ray_id: str
    v: Covector  # primitive in chi_*(S)


def gstable_rays(fan: ColoredFan) -> tuple[GStableRay, ...]:
    """One-dimensional faces of member cones meeting the valuation cone,
    with primitive generators; ids follow the lexicographic generator order."""
    space = fan.space
    cm = negative_chamber(space.roots)
    prims: set[Covector] = set()
    for cc in fan.maximal_cones:
        for r in cc.cone.rays:
            if cone_contains(cm, r):
                prims.add(space.primitive_covector(r))
    ordered = sorted(prims)
    return tuple(GStableRay(f"r{i}", v) for i, v in enumerate(ordered))


def decolorate(fan: ColoredFan) -> ColoredFan:
    """Intersect every cone with the valuation cone and drop all colors."""
    space = fan.space
    cm = negative_chamber(space.roots)
    pieces = []
    for cc in fan.maximal_cones:
        piece = intersect_cones(cc.cone, cm)
        if not piece.is_zero():
            pieces.append(piece)
    keep: list[ConeQ] = []
    for c in pieces:
        if any(c != d and cone_le(c, d) for d in pieces):
            continue
        if c not in keep:
            keep.append(c)
    cones = tuple(sorted((ColoredCone(c, frozenset()) for c in keep), key=ColoredCone.sort_key))
    return ColoredFan(space, cones)


def toric_slice_fan(fan: ColoredFan) -> tuple[ConeQ, ...]:
    """Weyl translates of the member cones: the fan of the toric slice.

    Requires a toroidal, complete fan; the result is a complete plain fan in
    chi_*(S), invariant under the Weyl group.
    """
    if not is_toroidal(fan):
        raise ValueError("toric slice fan needs a toroidal fan")
    if not is_complete(fan):
        raise ValueError("toric slice fan needs a complete fan")
    out: set[ConeQ] = set()
    for w in covector_weyl_elements(fan.space.roots):
        for cc in fan.maximal_cones:
            moved = cone_from_generators([tuple(dot(row, r) for row in w) for r in cc.cone.rays], fan.space.rank)
            out.add(moved)
    return tuple(sorted(out, key=lambda c: (c.rays, c.lineality)))


def slice_ray_orbits(fan: ColoredFan) -> dict[str, tuple[Covector, ...]]:
    """For each G-stable ray, the distinct Weyl translates of its primitive
    generator: the toric prime divisors of the slice hit by its closure."""
    space = fan.space
    orbits = {}
    for ray in gstable_rays(fan):
        seen = set()
        for w in covector_weyl_elements(space.roots):
            seen.add(tuple(dot(row, ray.v) for row in w))
        orbits[ray.ray_id] = tuple(sorted(seen))
    return orbits


# ---------------------------------------------------------------------------
# Q-factorialization


@dataclass(frozen=True)
class QFactorialization:
    """Result of the refinement construction: the new variety, plus the
    identification data (the ray and color generator sets coincide, so the
    class-group presentations are literally identical)."""

    variety: SymVariety
    ray_ids: tuple[str, ...]
    scaling_n: int
    ample_used: "object"


def _symmetrize_colors(fan: ColoredFan) -> ColoredFan:
    """Replace each cone's color set by the full fibres over its roots."""
    space = fan.space
    new = []
    for cc in fan.maximal_cones:
        roots = {c.root_index for c in cc.colors}
        full: set[ColorId] = set()
        for i in roots:
            if space.colors[i].multiplicity == 1:
                full.add(ColorId(i, None))
            else:
                full.add(ColorId(i, "+"))
                full.add(ColorId(i, "-"))
        new.append(ColoredCone(cc.cone, frozenset(full)))
    return ColoredFan(space, tuple(sorted(new, key=ColoredCone.sort_key)))


def qfactorialize(variety: SymVariety, ample_hint=None) -> QFactorialization:
    """Refine the fan to a Q-factorial one dominating the input, without
    touching codimension-one data.

    Steps: symmetrize the color sets; produce an ample divisor linearly
    equivalent to a G-stable one whose moment polytope has 0 in its
    interior (searching if no hint is given, then following the
    D' -> D'' -> D3 -> D4 -> n*D4 + correction chain, doubling n); take the
    polar polytope; push-triangulate it with 0 first; keep the boundary
    simplices whose cones meet the valuation cone; re-attach one color per
    color-vertex consistently.
    """
    from . import divisors as dv

    fan = variety.fan
    space = fan.space
    if not variety.complete:
        raise ConstructionError("input fan is not complete")
    tilde = SymVariety(_symmetrize_colors(fan))

    if ample_hint is not None:
        if not dv.is_ample(variety, ample_hint):
            raise ConstructionError("ample hint is not ample: cannot certify projectivity")
        dprime = ample_hint
    else:
        dprime = dv.search_ample(variety)
        if dprime is None:
            raise ConstructionError("no ample divisor found: cannot certify projectivity")

    dmt, n_used = dv.gstable_ample_with_interior(variety, tilde, dprime)
    pd = dv.moment_polytope(tilde, dmt)
    polar = dv.polar_of_moment(pd)

    from .geometry import boundary_simplices, push_triangulate

    order = [zero_vec(space.rank)] + sorted(polar.vertices)
    tri = push_triangulate(polar, order)
    cm = negative_chamber(space.roots)

    kept: list[tuple[ConeQ, tuple[Vec, ...]]] = []
    for simplex in boundary_simplices(tri):
        pts = tuple(tri.points[i] for i in simplex)
        cone = cone_from_generators(pts, space.rank)
        if _relint_meets([cone], inside=cm):
            kept.append((cone, pts))
    if not kept:
        raise ConstructionError("no refined cone meets the valuation cone")

    # choose one color per root, consistently across all simplices
    needed: dict[int, list[ConeQ]] = {}
    cone_roots: list[tuple[ConeQ, set[int]]] = []
    for cone, pts in kept:
        roots_here: set[int] = set()
        for u in pts:
            if cone_contains(cm, u):
                continue
            support = [k for k in range(space.rank) if u[k] != 0]
            if len(support) == 1 and u[support[0]] > 0:
                roots_here.add(support[0])
            else:
                raise ConstructionError(
                    f"refined ray {u} is neither invariant nor over a simple coroot"
                )
        cone_roots.append((cone, roots_here))
        for i in roots_here:
            needed.setdefault(i, []).append(cone)

    chosen: dict[int, ColorId] = {}
    for i, cones_i in needed.items():
        fibre = [c for c in space.all_colors() if c.root_index == i]
        feasible = set(fibre)
        for cone in cones_i:
            containers = [cc for cc in fan.maximal_cones if cone_le(cone, cc.cone)]
            if not containers:
                raise ConstructionError("refined cone not contained in any original cone")
            for cc in containers:
                feasible &= {c for c in cc.colors if c.root_index == i}
        if not feasible:
            raise ConstructionError(f"no consistent color choice over root {i}")
        for sign in ("+", "-", None):
            pick = next((c for c in sorted(feasible, key=lambda c: c.label()) if c.sign == sign), None)
            if pick is not None:
                chosen[i] = pick
                break

    new_cones = [
        ColoredCone(cone, frozenset(chosen[i] for i in roots_here))
        for cone, roots_here in cone_roots
    ]
    new_fan = ColoredFan(space, tuple(sorted(new_cones, key=ColoredCone.sort_key)))
    problems = validate_fan(new_fan)
    if problems:
        raise ConstructionError(f"refined fan invalid: {problems}")
    new_var = SymVariety(new_fan)
    if not new_var.qfactorial:
        raise ConstructionError("refined fan is not Q-factorial")
    old_cones = [cc.cone for cc in fan.maximal_cones]
    refined = [cc.cone for cc in new_fan.maximal_cones]
    for cone in refined:
        if not any(cone_le(cone, c) for c in old_cones):
            raise ConstructionError("output cone not contained in an input cone")
    for c in old_cones:
        if not _covers(c, refined):
            raise ConstructionError("support not preserved")
    old_rays = gstable_rays(fan)
    new_rays = gstable_rays(new_fan)
    if old_rays != new_rays:
        raise ConstructionError("invariant rays changed: not an isomorphism in codimension 1")
    return QFactorialization(new_var, tuple(r.ray_id for r in new_rays), n_used, dmt)
