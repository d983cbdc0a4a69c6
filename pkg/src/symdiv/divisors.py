"""Divisors on symmetric varieties and their criteria.

A B-stable divisor is a coefficient vector on the colors of the space and
the invariant rays of the fan.  This module computes Cartier data
(piecewise linear functions), the nef/ample/globally-generated tests, the
star reduction to a G-stable part, moment and weight polytopes, section
highest weights, the restriction to the toric slice, the effective cone
with its extremal rays, big-cone membership, and both bigness criteria.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from . import lp
from .fans import (
    ColoredFan,
    GStableRay,
    SymVariety,
    decolorate,
    gstable_rays,
    toric_slice_fan,
)
from .geometry import (
    PolytopeQ,
    cone_from_generators,
    cone_le,
    convex_hull,
    lattice_points,
    polar_polytope,
    polytope_equal,
    polytope_from_halfspaces,
    polytope_volume,
    solve_exact,
)
from .linalg import (
    Mat,
    Vec,
    dot,
    is_integral,
    is_zero,
    lattice_basis_in_subspace,
    mat_vec,
    qv,
    reduce_mod_rows,
    rref,
    unit_vec,
    vadd,
    vneg,
    vscale,
    vsub,
    zero_vec,
)
from .roots import (
    Weight,
    irreducible_factors,
    is_antidominant,
    weyl_group,
)
from .spaces import ColorId, SymmetricSpaceData, color_image


class NotQCartierError(ValueError):
    """The divisor admits no piecewise linear Cartier data."""


# ---------------------------------------------------------------------------
# divisors


@dataclass(frozen=True)
class BDivisor:
    """Coefficients on colors (a_F) and invariant rays (b_E); absent keys
    are zero.  Integral divisors are the sub-case with integer values."""

    colors: tuple[tuple[ColorId, Fraction], ...]
    rays: tuple[tuple[str, Fraction], ...]

    @staticmethod
    def make(colors: Mapping | None = None, rays: Mapping | None = None) -> "BDivisor":
        cc = []
        for key, val in (colors or {}).items():
            cid = ColorId.parse(key) if isinstance(key, str) else key
            val = Fraction(val)
            if val != 0:
                cc.append((cid, val))
        rr = [(rid, Fraction(val)) for rid, val in (rays or {}).items() if Fraction(val) != 0]
        return BDivisor(tuple(sorted(cc, key=lambda t: t[0].label())), tuple(sorted(rr)))

    def color(self, c: ColorId) -> Fraction:
        for cid, val in self.colors:
            if cid == c:
                return val
        return Fraction(0)

    def ray(self, rid: str) -> Fraction:
        for r, val in self.rays:
            if r == rid:
                return val
        return Fraction(0)

    def is_gstable(self) -> bool:
        return not self.colors

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for _, v in self.colors) and all(
            v.denominator == 1 for _, v in self.rays
        )

    def scale(self, t) -> "BDivisor":
        t = Fraction(t)
        return BDivisor.make({c: t * v for c, v in self.colors}, {r: t * v for r, v in self.rays})

    def add(self, other: "BDivisor") -> "BDivisor":
        cc = {c: v for c, v in self.colors}
        for c, v in other.colors:
            cc[c] = cc.get(c, Fraction(0)) + v
        rr = {r: v for r, v in self.rays}
        for r, v in other.rays:
            rr[r] = rr.get(r, Fraction(0)) + v
        return BDivisor.make(cc, rr)

    def sub(self, other: "BDivisor") -> "BDivisor":
        return self.add(other.scale(-1))


def validate_divisor(variety: SymVariety, d: BDivisor) -> list[str]:
    space = variety.space
    known = {r.ray_id for r in gstable_rays(variety.fan)}
    problems = []
    for c, _ in d.colors:
        if not space.has_color(c):
            problems.append(f"unknown color {c.label()}")
    for r, _ in d.rays:
        if r not in known:
            problems.append(f"unknown ray {r}")
    return problems


def principal_divisor(variety: SymVariety, w: Weight, rational: bool = False) -> BDivisor:
    """div(f_w) = sum over colors of pairing(w, alpha^) + sum over rays of
    pairing(w, v_E); each color of a two-element fibre receives the same
    coefficient."""
    space = variety.space
    w = qv(w)
    if len(w) != space.rank:
        raise ValueError("weight dimension mismatch")
    if not rational and not space.weight_in_lattice(w):
        raise ValueError(f"weight {w} is not in the character lattice")
    colors = {c: w[c.root_index] for c in space.all_colors()}
    rays = {r.ray_id: dot(w, r.v) for r in gstable_rays(variety.fan)}
    return BDivisor.make(colors, rays)


# ---------------------------------------------------------------------------
# class groups (generic small presentation)


@dataclass(frozen=True)
class Presentation:
    """Finitely generated rational vector space presented by generators and
    relations; classes are reduced onto the non-pivot generator basis."""

    generator_names: tuple[str, ...]
    relations: Mat
    red_rows: Mat
    pivots: tuple[int, ...]
    free: tuple[int, ...]

    @property
    def class_rank(self) -> int:
        return len(self.free)

    def reduce(self, vector: Sequence) -> Vec:
        v = reduce_mod_rows(qv(vector), self.red_rows, self.pivots)
        return tuple(v[i] for i in self.free)

    def basis_names(self) -> tuple[str, ...]:
        return tuple(self.generator_names[i] for i in self.free)


def make_presentation(names: Sequence[str], relations: Sequence[Vec]) -> Presentation:
    red, piv = rref(relations)
    free = tuple(i for i in range(len(names)) if i not in piv)
    return Presentation(
        tuple(names), tuple(tuple(r) for r in relations), tuple(tuple(r) for r in red), tuple(piv), free
    )


@dataclass(frozen=True)
class DivisorClass:
    coords: Vec
    basis: tuple[str, ...]

    def is_zero(self) -> bool:
        return is_zero(self.coords)


def generator_names(variety: SymVariety) -> tuple[str, ...]:
    names = [c.label() for c in variety.space.all_colors()]
    names.extend(r.ray_id for r in gstable_rays(variety.fan))
    return tuple(names)


def divisor_vector(variety: SymVariety, d: BDivisor) -> Vec:
    space = variety.space
    vec = [d.color(c) for c in space.all_colors()]
    vec.extend(d.ray(r.ray_id) for r in gstable_rays(variety.fan))
    return tuple(vec)


@lru_cache(maxsize=None)
def class_group(variety: SymVariety) -> Presentation:
    """Presentation of Cl(X)_Q: the B-stable prime divisors modulo one
    relation div(f_b) per lattice basis weight b."""
    relations = [
        divisor_vector(variety, principal_divisor(variety, b))
        for b in variety.space.lattice
    ]
    return make_presentation(generator_names(variety), relations)


def divisor_class(variety: SymVariety, d: BDivisor) -> DivisorClass:
    pres = class_group(variety)
    return DivisorClass(pres.reduce(divisor_vector(variety, d)), pres.basis_names())


def generator_classes(variety: SymVariety) -> dict[str, Vec]:
    pres = class_group(variety)
    out = {}
    for i, name in enumerate(pres.generator_names):
        out[name] = pres.reduce(unit_vec(i, len(pres.generator_names)))
    return out


# ---------------------------------------------------------------------------
# Cartier data


@dataclass(frozen=True)
class PLFunction:
    """Per-maximal-cone linear forms h_C (as weights), agreeing on shared
    faces; ``integral`` records whether all values on lattice points of the
    support are integers."""

    pieces: tuple[Weight, ...]
    integral: bool


def _cone_ray_data(variety: SymVariety) -> list[list[tuple[Vec, str]]]:
    """For each maximal cone: its invariant rays as (primitive v_E, ray id)."""
    fan = variety.fan
    rays = gstable_rays(fan)
    by_prim = {r.v: r.ray_id for r in rays}
    out = []
    for cc in fan.maximal_cones:
        mine = []
        for r in cc.cone.rays:
            prim = variety.space.primitive_covector(r)
            if prim in by_prim:
                mine.append((prim, by_prim[prim]))
        out.append(mine)
    return out


def cartier_data(variety: SymVariety, d: BDivisor) -> PLFunction | None:
    """Solve for the piecewise linear function realizing d; None when the
    divisor is not Q-Cartier.  Pieces are unique as functions on their
    cones; the stored representatives are canonical (free coordinates 0)."""
    fan = variety.fan
    space = variety.space
    ncones = len(fan.maximal_cones)
    if ncones == 0:
        return PLFunction((), True)
    s = space.rank
    rows: list[Vec] = []
    rhs: list[Fraction] = []

    def h_row(ci: int, form: Vec) -> Vec:
        row = [Fraction(0)] * (ncones * s)
        for k in range(s):
            row[ci * s + k] = form[k]
        return tuple(row)

    ray_data = _cone_ray_data(variety)
    for ci, cc in enumerate(fan.maximal_cones):
        for prim, rid in ray_data[ci]:
            rows.append(h_row(ci, prim))
            rhs.append(d.ray(rid))
        for c in cc.colors:
            rows.append(h_row(ci, color_image(space, c)))
            rhs.append(d.color(c))
    from .geometry import intersect_cones

    for i, j in itertools.combinations(range(ncones), 2):
        shared = intersect_cones(fan.maximal_cones[i].cone, fan.maximal_cones[j].cone)
        for g in shared.generators():
            rows.append(tuple(a - b for a, b in zip(h_row(i, g), h_row(j, g))))
            rhs.append(Fraction(0))
    sol = solve_exact(rows, rhs)
    if sol is None:
        return None
    pieces = tuple(tuple(sol.particular[ci * s + k] for k in range(s)) for ci in range(ncones))
    integral = _pl_is_integral(variety, pieces)
    return PLFunction(pieces, integral)


def _pl_is_integral(variety: SymVariety, pieces: Sequence[Weight]) -> bool:
    """Integral values on every lattice point of the support: checked on a
    lattice basis of chi_*(S) within each cone's span."""
    space = variety.space
    dual = space.dual_lattice()
    for cc, h in zip(variety.fan.maximal_cones, pieces):
        gens = cc.cone.generators()
        if not gens:
            continue
        span_z = [mat_vec(space.lattice, g) for g in gens]
        basis_z = lattice_basis_in_subspace(span_z, space.rank)
        for z in basis_z:
            v = zero_vec(space.rank)
            for zi, row in zip(z, dual):
                v = vadd(v, vscale(zi, row))
            if dot(h, v).denominator != 1:
                return False
    return True


# ---------------------------------------------------------------------------
# nef / ample / globally generated


def _require_full_dim(variety: SymVariety) -> None:
    s = variety.space.rank
    for cc in variety.fan.maximal_cones:
        if cc.cone.dim() != s:
            raise ValueError(
                "degenerate support: maximal cone of dimension "
                f"{cc.cone.dim()} < {s}; criteria need a complete fan"
            )


def _nef_test(variety: SymVariety, d: BDivisor, strict: bool) -> bool:
    h = cartier_data(variety, d)
    if h is None:
        raise NotQCartierError("divisor is not Q-Cartier")
    _require_full_dim(variety)
    fan = variety.fan
    space = variety.space
    cones = fan.maximal_cones
    for ci, cc in enumerate(cones):
        for cj, other in enumerate(cones):
            if ci == cj:
                continue
            for v in other.cone.rays:
                mine = dot(h.pieces[ci], v)
                theirs = dot(h.pieces[cj], v)
                if mine > theirs:
                    return False
                if strict and mine == theirs and not _cone_has(cc, v):
                    return False
        for f in space.all_colors():
            if f in cc.colors:
                continue
            val = dot(h.pieces[ci], color_image(space, f))
            af = d.color(f)
            if val > af or (strict and val == af):
                return False
    return True


def _cone_has(cc, v) -> bool:
    from .geometry import cone_contains

    return cone_contains(cc.cone, v)


def is_globally_generated(variety: SymVariety, d: BDivisor) -> bool:
    """Convexity of the Cartier data plus the color inequalities."""
    return _nef_test(variety, d, strict=False)


def is_nef(variety: SymVariety, d: BDivisor) -> bool:
    """Nef coincides with globally generated here."""
    return _nef_test(variety, d, strict=False)


def is_ample(variety: SymVariety, d: BDivisor) -> bool:
    """Strict convexity plus strict color inequalities."""
    return _nef_test(variety, d, strict=True)


# ---------------------------------------------------------------------------
# star reduction to a G-stable part


@dataclass(frozen=True)
class StarReduction:
    """D ~ d1 + d2 with d1 G-stable and d2 supported on surviving colors of
    two-element fibres; ``renamed`` lists roots whose two colors were
    exchanged, ``shift`` is the weight of the principal divisor subtracted,
    and ``h1`` is the function of d1 on the decoloration's maximal cones."""

    d1: BDivisor
    d2: BDivisor
    renamed: tuple[int, ...]
    shift: Weight
    dec_fan: ColoredFan
    h1: tuple[Weight, ...]


def reduce_star(variety: SymVariety, d: BDivisor, require_nef: bool = True) -> StarReduction:
    space = variety.space
    if require_nef and not is_nef(variety, d):
        raise ValueError("star reduction requires a nef divisor")
    h = cartier_data(variety, d)
    if h is None:
        raise NotQCartierError("divisor is not Q-Cartier")
    shift = [Fraction(0)] * space.rank
    d2: dict[ColorId, Fraction] = {}
    renamed = []
    for spec in space.colors:
        i = spec.root_index
        if spec.multiplicity == 1:
            shift[i] = d.color(ColorId(i, None))
        else:
            ap = d.color(ColorId(i, "+"))
            am = d.color(ColorId(i, "-"))
            if am > ap:
                renamed.append(i)
                ap, am = am, ap
                survivor = ColorId(i, "-")
            else:
                survivor = ColorId(i, "+")
            shift[i] = am
            if ap != am:
                d2[survivor] = ap - am
    shift_w = tuple(shift)
    d1 = d.sub(principal_divisor(variety, shift_w, rational=True)).sub(BDivisor.make(d2, {}))
    assert d1.is_gstable(), "star reduction left a color coefficient behind"
    dec = decolorate(variety.fan)
    pieces = []
    for cc in dec.maximal_cones:
        owner = next(
            ci
            for ci, orig in enumerate(variety.fan.maximal_cones)
            if cone_le(cc.cone, orig.cone)
        )
        pieces.append(vsub(h.pieces[owner], shift_w))
    return StarReduction(d1, BDivisor.make(d2, {}), tuple(renamed), shift_w, dec, tuple(pieces))


# ---------------------------------------------------------------------------
# polytopes of divisors


def moment_polytope(variety: SymVariety, d: BDivisor) -> PolytopeQ:
    """{m : pairing(m, v_E) + b_E >= 0, pairing(m, rho F) + a_F >= 0},
    in weight coordinates.  May be empty."""
    space = variety.space
    halfspaces = []
    for r in gstable_rays(variety.fan):
        halfspaces.append((r.v, -d.ray(r.ray_id)))
    for c in space.all_colors():
        halfspaces.append((color_image(space, c), -d.color(c)))
    return polytope_from_halfspaces(halfspaces, space.rank)


def h0_highest_weights(variety: SymVariety, d: BDivisor) -> list[Weight]:
    """Lattice points of the moment polytope: the highest weights of the
    space of sections.  Requires an integral Cartier divisor."""
    if not d.is_integral():
        raise ValueError("sections need an integral divisor")
    h = cartier_data(variety, d)
    if h is None:
        raise NotQCartierError("divisor is not Q-Cartier")
    if not h.integral:
        raise ValueError("divisor is Q-Cartier but not Cartier (non-integral data)")
    p = moment_polytope(variety, d)
    if p.is_empty():
        return []
    return lattice_points(p, variety.space.lattice)


def weight_polytope(variety: SymVariety, d: BDivisor) -> PolytopeQ:
    """Convex hull of the Weyl orbit of the cone weights h_C, for a
    G-stable nef divisor on a toroidal complete variety; checks the
    positive-chamber factorization of the moment polytope."""
    if not variety.toroidal or not variety.complete:
        raise ValueError("weight polytope needs a toroidal complete variety")
    if not d.is_gstable():
        raise ValueError("weight polytope needs a G-stable divisor")
    if not is_nef(variety, d):
        raise ValueError("weight polytope needs a nef divisor")
    h = cartier_data(variety, d)
    w = weyl_group(variety.space.roots)
    points = []
    for piece in h.pieces:
        for g in w.elements:
            points.append(mat_vec(g, piece))
    q = convex_hull(points)
    chamber = [(unit_vec(i, variety.space.rank), Fraction(0)) for i in range(variety.space.rank)]
    pq = polytope_from_halfspaces(list(q.halfspaces) + chamber, variety.space.rank)
    if not polytope_equal(pq, moment_polytope(variety, d)):
        raise AssertionError("moment polytope is not the dominant part of the weight polytope")
    return q


def toric_volume(variety: SymVariety, d: BDivisor) -> Fraction:
    """(rank)! times the lattice volume of the weight polytope: the degree
    of the divisor's restriction to the toric slice."""
    q = weight_polytope(variety, d)
    return factorial(variety.space.rank) * polytope_volume(q, variety.space.lattice)


# ---------------------------------------------------------------------------
# restriction to the toric slice


@lru_cache(maxsize=None)
def slice_class_group(variety: SymVariety) -> tuple[Presentation, tuple[Vec, ...]]:
    """Toric class group of the slice fan: rays modulo characters."""
    fan = variety.fan
    space = variety.space
    rays: set[Vec] = set()
    for cone in toric_slice_fan(fan):
        for r in cone.rays:
            rays.add(space.primitive_covector(r))
    ordered = tuple(sorted(rays))
    relations = [tuple(dot(b, u) for u in ordered) for b in space.lattice]
    names = tuple(f"z{i}" for i in range(len(ordered)))
    return make_presentation(names, relations), ordered


def _slice_ray_image(variety: SymVariety, ray: GStableRay) -> Vec:
    """Coefficient vector on the slice rays of the symmetrized divisor:
    one per distinct Weyl translate of the invariant ray."""
    from .roots import covector_weyl_elements

    _, ordered = slice_class_group(variety)
    orbit = set()
    for w in covector_weyl_elements(variety.space.roots):
        orbit.add(tuple(dot(row, ray.v) for row in w))
    return tuple(Fraction(1) if u in orbit else Fraction(0) for u in ordered)


def slice_restriction_class(variety: SymVariety, d: BDivisor) -> DivisorClass:
    """Class of the restriction of d to the toric slice.

    Invariant rays restrict to their symmetrized toric divisors; a color
    over alpha restricts to half the restriction of the invariant divisor
    Y_alpha with 2 F = Y_alpha on the slice (fibres of two colors), or to
    the full Y_alpha for a one-color fibre.
    """
    if not variety.toroidal or not variety.complete:
        raise ValueError("slice restriction needs a toroidal complete variety")
    pres, ordered = slice_class_group(variety)
    space = variety.space
    rays = gstable_rays(variety.fan)
    total = [Fraction(0)] * len(ordered)

    def add(vec: Vec, t: Fraction):
        for k in range(len(total)):
            total[k] += t * vec[k]

    images = {r.ray_id: _slice_ray_image(variety, r) for r in rays}
    for rid, val in d.rays:
        add(images[rid], val)
    for c, val in d.colors:
        spec = space.colors[c.root_index]
        scale = Fraction(1, 2) if spec.multiplicity == 2 else Fraction(1)
        for r in rays:
            coeff = -dot(unit_vec(c.root_index, space.rank), r.v)
            if coeff != 0:
                add(images[r.ray_id], val * scale * coeff)
    return DivisorClass(pres.reduce(tuple(total)), pres.basis_names())


def gstable_partner(variety: SymVariety, root_index: int) -> BDivisor:
    """Y_alpha: the invariant divisor with the same slice restriction as
    twice either color over alpha (for a two-color fibre)."""
    rays = {
        r.ray_id: -dot(unit_vec(root_index, variety.space.rank), r.v)
        for r in gstable_rays(variety.fan)
    }
    return BDivisor.make({}, rays)


def kernel_basis_classes(variety: SymVariety) -> list[tuple[int, DivisorClass]]:
    """Classes [F_a^+ - F_a^-], one per two-color fibre: the kernel of the
    restriction to the toric slice."""
    out = []
    for spec in variety.space.colors:
        if spec.multiplicity != 2:
            continue
        diff = BDivisor.make({ColorId(spec.root_index, "+"): 1, ColorId(spec.root_index, "-"): -1}, {})
        out.append((spec.root_index, divisor_class(variety, diff)))
    return out


# ---------------------------------------------------------------------------
# effective cone / big cone


def _family_names(variety: SymVariety) -> tuple[list[str], list[str]]:
    """(two-color fibre color labels, invariant ray ids)."""
    space = variety.space
    doubles = [
        c.label() for c in space.all_colors() if space.colors[c.root_index].multiplicity == 2
    ]
    ray_ids = [r.ray_id for r in gstable_rays(variety.fan)]
    return doubles, ray_ids


@dataclass(frozen=True)
class EffectiveCone:
    basis: tuple[str, ...]
    generators: tuple[tuple[str, Vec], ...]
    extremal_rays: tuple[tuple[Vec, tuple[str, ...], str], ...]
    """Each extremal ray: (primitive direction, all generators on it, the
    unique generating divisor from the two predicted families)."""


def _positively_proportional(a: Vec, b: Vec) -> bool:
    if is_zero(a) or is_zero(b):
        return False
    ratio = None
    for x, y in zip(a, b):
        if (x == 0) != (y == 0):
            return False
        if x != 0:
            r = x / y
            if r <= 0 or (ratio is not None and r != ratio):
                return False
            ratio = r
    return True


def effective_cone(variety: SymVariety) -> EffectiveCone:
    """Cone of effective classes, generated by the B-stable prime divisors,
    with its extremal rays and the unique family generator on each.

    Requires a complete Q-factorial variety.  Asserts the structural
    characterization: the extremal generators are exactly the colors of
    two-element fibres together with the invariant divisors whose class is
    not proportional to any such fibre sum.
    """
    if not variety.complete or not variety.qfactorial:
        raise ValueError("effective cone computation needs a complete Q-factorial variety")
    pres = class_group(variety)
    gcls = generator_classes(variety)
    names = list(pres.generator_names)
    cone = cone_from_generators([gcls[n] for n in names], pres.class_rank)
    doubles, ray_ids = _family_names(variety)
    space = variety.space
    fibre_sums = {}
    for spec in space.colors:
        if spec.multiplicity == 2:
            s = vadd(gcls[ColorId(spec.root_index, "+").label()], gcls[ColorId(spec.root_index, "-").label()])
            fibre_sums[spec.root_index] = s
    predicted = set(doubles)
    for rid in ray_ids:
        if not any(_positively_proportional(gcls[rid], s) for s in fibre_sums.values()):
            predicted.add(rid)
    extremal = []
    for r in cone.rays:
        on_ray = tuple(n for n in names if _positively_proportional(gcls[n], r))
        family = [n for n in on_ray if n in predicted]
        if len(family) != 1:
            raise AssertionError(
                f"extremal ray {r} carries {len(family)} family generators ({family})"
            )
        extremal.append((r, on_ray, family[0]))
    found = {f for _, _, f in extremal}
    if found != predicted:
        raise AssertionError(
            f"extremal generators {sorted(found)} differ from predicted {sorted(predicted)}"
        )
    return EffectiveCone(
        pres.basis_names(),
        tuple((n, gcls[n]) for n in names),
        tuple(sorted(extremal)),
    )


def proportional_to_color(variety: SymVariety, ray_id: str) -> list[frozenset[int]]:
    """Irreducible factors R with every fundamental weight of R orthogonal
    to every other invariant ray: exactly when [E] is proportional to the
    fibre sum [F_alpha] for each alpha in R.  The class-level statement is
    cross-checked exactly."""
    rays = gstable_rays(variety.fan)
    mine = next((r for r in rays if r.ray_id == ray_id), None)
    if mine is None:
        raise ValueError(f"unknown ray {ray_id}")
    others = [r for r in rays if r.ray_id != ray_id]
    out = []
    for factor in irreducible_factors(variety.space.roots):
        if all(r.v[i] == 0 for r in others for i in factor):
            out.append(factor)
    gcls = generator_classes(variety)
    space = variety.space
    for factor in irreducible_factors(space.roots):
        for i in factor:
            fibre = [c for c in space.all_colors() if c.root_index == i]
            total = zero_vec(class_group(variety).class_rank)
            for c in fibre:
                total = vadd(total, gcls[c.label()])
            prop = _positively_proportional(gcls[ray_id], total)
            if (factor in out) != prop:
                raise AssertionError(
                    f"orthogonality and class proportionality disagree on root {i}"
                )
    return out


def big_cone_membership(variety: SymVariety, cls: DivisorClass) -> bool:
    """Membership in the union over sign choices of
    (positive invariant span) + (nonnegative chosen-color span)."""
    if not variety.complete or not variety.qfactorial:
        raise ValueError("big cone membership needs a complete Q-factorial variety")
    gcls = generator_classes(variety)
    space = variety.space
    ray_ids = [r.ray_id for r in gstable_rays(variety.fan)]
    doubles = [spec.root_index for spec in space.colors if spec.multiplicity == 2]
    target = cls.coords
    k = len(ray_ids)
    for signs in itertools.product("+-", repeat=len(doubles)):
        cols = [gcls[rid] for rid in ray_ids]
        cols += [gcls[ColorId(i, s).label()] for i, s in zip(doubles, signs)]
        nvars = len(cols)
        a_eq = [[cols[j][t] for j in range(nvars)] for t in range(len(target))]
        ident = [[Fraction(1 if j == t else 0) for j in range(nvars)] for t in range(nvars)]
        pt = lp.strict_feasible_point(
            ident, [0] * nvars, strict=list(range(k)), a_eq=a_eq, b_eq=list(target)
        )
        if pt is not None:
            return True
    return False


def is_big(variety: SymVariety, d: BDivisor) -> bool:
    """Class-level bigness on a complete Q-factorial variety."""
    return big_cone_membership(variety, divisor_class(variety, d))


def is_big_nef(variety: SymVariety, d: BDivisor) -> bool:
    """Bigness of a nef divisor: after the star reduction, the summed cone
    weights must pair nontrivially with every irreducible coroot factor."""
    if not is_nef(variety, d):
        raise ValueError("divisor is not nef")
    red = reduce_star(variety, d, require_nef=False)
    s = variety.space.rank
    for h in red.h1:
        if not is_antidominant(h):
            raise AssertionError("nef invariant data produced a non-antidominant weight")
    total = zero_vec(s)
    for h in red.h1:
        total = vadd(total, h)
    for factor in irreducible_factors(variety.space.roots):
        if all(total[i] == 0 for i in factor):
            return False
    return True


# ---------------------------------------------------------------------------
# Picard group


@dataclass(frozen=True)
class PicardData:
    rank: int
    class_rank: int
    basis: tuple[Vec, ...]  # class coordinates of a basis of Pic_Q
    qfactorial_equality: bool


def picard_group(variety: SymVariety) -> PicardData:
    """Rational Picard subspace of Cl_Q: classes of Q-Cartier B-stable
    divisors.  For Q-factorial varieties this is all of Cl_Q; for a simple
    variety the colors outside the fan's color set form a basis."""
    fan = variety.fan
    space = variety.space
    pres = class_group(variety)
    names = pres.generator_names
    ngen = len(names)
    ncones = len(fan.maximal_cones)
    s = space.rank
    nvars = ngen + ncones * s
    rows: list[Vec] = []

    def row_of(form_ci: int, form: Vec, gen_name: str | None) -> Vec:
        row = [Fraction(0)] * nvars
        for kk in range(s):
            row[ngen + form_ci * s + kk] = form[kk]
        if gen_name is not None:
            row[names.index(gen_name)] -= 1
        return tuple(row)

    ray_data = _cone_ray_data(variety)
    for ci, cc in enumerate(fan.maximal_cones):
        for prim, rid in ray_data[ci]:
            rows.append(row_of(ci, prim, rid))
        for c in cc.colors:
            rows.append(row_of(ci, color_image(space, c), c.label()))
    from .geometry import intersect_cones

    for i, j in itertools.combinations(range(ncones), 2):
        shared = intersect_cones(fan.maximal_cones[i].cone, fan.maximal_cones[j].cone)
        for g in shared.generators():
            ri = row_of(i, g, None)
            rj = row_of(j, g, None)
            rows.append(tuple(a - b for a, b in zip(ri, rj)))
    from .linalg import kernel_basis

    kern = kernel_basis(rows, nvars) if rows else [unit_vec(i, nvars) for i in range(nvars)]
    images = [pres.reduce(tuple(v[:ngen])) for v in kern]
    red, piv = rref(images)
    basis = tuple(tuple(r) for r in red)
    return PicardData(len(piv), pres.class_rank, basis, len(piv) == pres.class_rank)


# ---------------------------------------------------------------------------
# ample search and the divisor chain for the Q-factorialization


def _ample_from_pieces(variety: SymVariety, pieces: Sequence[Vec]) -> BDivisor:
    space = variety.space
    fan = variety.fan
    rays = {}
    ray_data = _cone_ray_data(variety)
    for ci, _ in enumerate(fan.maximal_cones):
        for prim, rid in ray_data[ci]:
            rays[rid] = dot(pieces[ci], prim)
    colors = {}
    fan_colors = set()
    for cc in fan.maximal_cones:
        fan_colors |= cc.colors
    for c in space.all_colors():
        img = color_image(space, c)
        owner = next(
            (ci for ci, cc in enumerate(fan.maximal_cones) if c in cc.colors), None
        )
        if owner is not None:
            colors[c] = dot(pieces[owner], img)
        else:
            colors[c] = max(dot(p, img) for p in pieces) + 1
    return BDivisor.make(colors, rays)


def search_ample(variety: SymVariety) -> BDivisor | None:
    """Find an ample divisor by exact strict feasibility over the stacked
    cone weights, or None if the variety admits none (is not projective)."""
    fan = variety.fan
    space = variety.space
    ncones = len(fan.maximal_cones)
    if ncones == 0:
        return None
    s = space.rank
    nvars = ncones * s
    from .geometry import cone_contains, intersect_cones

    def h_row(ci: int, form: Vec, sign: int) -> Vec:
        row = [Fraction(0)] * nvars
        for k in range(s):
            row[ci * s + k] = sign * form[k]
        return tuple(row)

    a_eq: list[Vec] = []
    for i, j in itertools.combinations(range(ncones), 2):
        shared = intersect_cones(fan.maximal_cones[i].cone, fan.maximal_cones[j].cone)
        for g in shared.generators():
            a_eq.append(tuple(a + b for a, b in zip(h_row(i, g, 1), h_row(j, g, -1))))
    a_ge: list[Vec] = []
    for i, j in itertools.permutations(range(ncones), 2):
        ci, cj = fan.maximal_cones[i], fan.maximal_cones[j]
        for v in cj.cone.rays:
            if not cone_contains(ci.cone, v):
                # h_j(v) - h_i(v) > 0
                a_ge.append(tuple(a + b for a, b in zip(h_row(j, v, 1), h_row(i, v, -1))))
        for c in cj.colors:
            if c not in ci.colors:
                img = color_image(space, c)
                if not cone_contains(ci.cone, img) or True:
                    a_ge.append(tuple(a + b for a, b in zip(h_row(j, img, 1), h_row(i, img, -1))))
    if ncones == 1:
        a_ge.append(h_row(0, vneg(relint_sum(fan.maximal_cones[0])), 1))
    pt = lp.strict_feasible_point(a_ge, [0] * len(a_ge), strict=list(range(len(a_ge))), a_eq=a_eq, b_eq=[0] * len(a_eq))
    if pt is None:
        return None
    pieces = [tuple(pt[ci * s + k] for k in range(s)) for ci in range(ncones)]
    cand = _ample_from_pieces(variety, pieces)
    return cand if is_ample(variety, cand) else None


def relint_sum(cc) -> Vec:
    from .geometry import relative_interior_point

    return relative_interior_point(cc.cone)


def gstable_ample_with_interior(
    variety: SymVariety, tilde: SymVariety, dprime: BDivisor
) -> tuple[BDivisor, int]:
    """The divisor chain: from an ample divisor on X, produce an ample
    divisor on the color-symmetrized variety that is linearly equivalent to
    an invariant divisor and whose moment polytope has 0 interior."""
    from .fans import ConstructionError

    space = variety.space
    red = reduce_star(variety, dprime, require_nef=False)
    fan_colors = set()
    for cc in variety.fan.maximal_cones:
        fan_colors |= cc.colors
    dpp = red.d1
    for spec in space.colors:
        i = spec.root_index
        if spec.multiplicity != 2:
            continue
        survivor = ColorId(i, "-" if i in red.renamed else "+")
        a = red.d2.color(survivor)
        if survivor in fan_colors:
            dpp = dpp.add(BDivisor.make({ColorId(i, "+"): a, ColorId(i, "-"): a}, {}))
    tilde_roots = {c.root_index for cc in tilde.fan.maximal_cones for c in cc.colors}
    d3 = dpp
    for spec in space.colors:
        if spec.root_index not in tilde_roots:
            fibre = {c: 1 for c in space.all_colors() if c.root_index == spec.root_index}
            d3 = d3.add(BDivisor.make(fibre, {}))
    shift = [Fraction(0)] * space.rank
    for spec in space.colors:
        i = spec.root_index
        fibre = [c for c in space.all_colors() if c.root_index == i]
        vals = {d3.color(c) for c in fibre}
        if len(vals) != 1:
            raise ConstructionError(f"fibre coefficients over root {i} differ: {vals}")
        shift[i] = vals.pop()
    d4 = d3.sub(principal_divisor(variety, tuple(shift), rational=True))
    assert d4.is_gstable(), "invariant reduction failed"
    if not all(val > 0 for _, val in d4.rays) or len(d4.rays) != len(gstable_rays(variety.fan)):
        raise ConstructionError("reduced ample divisor lacks strictly positive ray data")
    base = BDivisor.make({}, {})
    for spec in space.colors:
        i = spec.root_index
        fibre = {c: 1 for c in space.all_colors() if c.root_index == i}
        base = base.add(BDivisor.make(fibre, {}))
        if i in tilde_roots:
            rays = {
                r.ray_id: -dot(unit_vec(i, space.rank), r.v)
                for r in gstable_rays(variety.fan)
            }
            base = base.add(BDivisor.make({}, rays))
    n = 1
    for _ in range(60):
        cand = d4.scale(n).add(base)
        h = cartier_data(tilde, cand)
        if h is None:
            if n >= 2:
                raise ConstructionError("refined divisor family is not Q-Cartier")
            n *= 2
            continue
        p = moment_polytope(tilde, cand)
        interior = not p.is_empty() and all(b < 0 for _, b in p.halfspaces)
        if interior and is_ample(tilde, cand):
            return cand, n
        n *= 2
    raise ConstructionError("no scaling produced an ample divisor with interior moment polytope")


def polar_of_moment(p: PolytopeQ) -> PolytopeQ:
    return polar_polytope(p)
