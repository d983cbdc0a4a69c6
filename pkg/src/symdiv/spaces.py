"""The combinatorial shadow of a symmetric space G/H: the weight lattice
chi(S), the colors with their multiplicities and exceptional flags, the
valuation cone, and the spherical closure.

Spaces are described abstractly by this data; nothing here asserts that a
given description is realized by an actual pair (G, theta).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import ConeQ
from .linalg import (
    Mat,
    Vec,
    dot,
    inverse,
    is_integral,
    mat_vec,
    primitive,
    qm,
    qv,
    transpose,
    unit_vec,
    vscale,
)
from .roots import (
    Covector,
    RestrictedRootSystem,
    Weight,
    build_root_system,
    irreducible_factors,
    negative_chamber,
)


@dataclass(frozen=True)
class ColorSpec:
    """Colors lying over one simple restricted root: their number (1 or 2)
    and whether the root is exceptional (two colors and 2*alpha a root)."""

    root_index: int
    multiplicity: int
    exceptional: bool


@dataclass(frozen=True)
class ColorId:
    """A single color: the fibre over alpha_i^, disambiguated by sign when
    the fibre has two elements."""

    root_index: int
    sign: str | None = None  # None | "+" | "-"

    def label(self) -> str:
        return f"F{self.root_index}{self.sign or ''}"

    @staticmethod
    def parse(label: str) -> "ColorId":
        if not label.startswith("F"):
            raise ValueError(f"bad color label {label!r}")
        body = label[1:]
        sign = None
        if body and body[-1] in "+-":
            sign, body = body[-1], body[:-1]
        return ColorId(int(body), sign)


@dataclass(frozen=True)
class FactorSpec:
    indices: frozenset[int]
    extra_color: bool


@dataclass(frozen=True)
class SymmetricSpaceData:
    """Restricted root system + lattice chi(S) + colors + factor partition.

    ``lattice`` rows are a basis of chi(S) in weight coordinates; the dual
    lattice chi_*(S) is always derived from it.  ``lattice_unresolved``
    marks lattices whose finite-index refinement is not pinned down (output
    of the spherical closure); rational computations ignore the flag.
    """

    roots: RestrictedRootSystem
    lattice: Mat
    colors: tuple[ColorSpec, ...]
    factor_partition: tuple[FactorSpec, ...]
    lattice_unresolved: bool = False
    name: str | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return self.roots.rank

    def dual_lattice(self) -> Mat:
        """Basis of chi_*(S) (rows, covector coordinates): dual basis to the
        lattice rows under the pairing."""
        return transpose(inverse(self.lattice))

    def weight_in_lattice(self, m: Weight) -> bool:
        coords = mat_vec(transpose(inverse(self.lattice)), qv(m))
        return is_integral(coords)

    def lattice_coords(self, m: Weight) -> Vec:
        """Coordinates of a weight in the chi(S) basis."""
        return mat_vec(transpose(inverse(self.lattice)), qv(m))

    def primitive_covector(self, v: Covector) -> Covector:
        """The primitive chi_*(S) point on the ray through v."""
        coords = mat_vec(self.lattice, qv(v))  # coords in the dual basis
        coords = primitive(coords)
        dual = self.dual_lattice()
        out = [Fraction(0)] * self.rank
        for c, row in zip(coords, dual):
            for k in range(self.rank):
                out[k] += c * row[k]
        return tuple(out)

    def all_colors(self) -> list[ColorId]:
        out = []
        for spec in self.colors:
            if spec.multiplicity == 1:
                out.append(ColorId(spec.root_index, None))
            else:
                out.append(ColorId(spec.root_index, "+"))
                out.append(ColorId(spec.root_index, "-"))
        return out

    def color_spec(self, i: int) -> ColorSpec:
        return self.colors[i]

    def has_color(self, c: ColorId) -> bool:
        if not 0 <= c.root_index < self.rank:
            return False
        spec = self.colors[c.root_index]
        if spec.multiplicity == 1:
            return c.sign is None
        return c.sign in ("+", "-")


def make_space(
    labels: Sequence[tuple[str, int]],
    lattice: Sequence[Sequence],
    colors: Sequence[tuple[int, int, bool]],
    factor_partition: Sequence[tuple[Iterable[int], bool]],
    name: str | None = None,
) -> SymmetricSpaceData:
    rs = build_root_system(labels)
    return SymmetricSpaceData(
        roots=rs,
        lattice=qm(lattice),
        colors=tuple(ColorSpec(*c) for c in colors),
        factor_partition=tuple(FactorSpec(frozenset(p), e) for p, e in factor_partition),
        name=name,
    )


def color_image(space: SymmetricSpaceData, c: ColorId) -> Covector:
    """rho(F) = alpha_i^ for the color's root; both signs map equally."""
    if not space.has_color(c):
        raise ValueError(f"unknown color {c.label()}")
    return unit_vec(c.root_index, space.rank)


def is_exceptional_space(space: SymmetricSpaceData) -> bool:
    return any(spec.exceptional for spec in space.colors)


@dataclass(frozen=True)
class ValuationCone:
    cone: ConeQ
    lattice_basis: Mat  # rows: basis of chi_*(S) in covector coordinates


def valuation_cone(space: SymmetricSpaceData) -> ValuationCone:
    """The negative chamber paired with the dual lattice chi_*(S); its
    lattice points are the invariant valuations."""
    return ValuationCone(negative_chamber(space.roots), space.dual_lattice())


def validate_space(space: SymmetricSpaceData) -> list[str]:
    """Check every structural invariant; returns violations (empty = valid)."""
    problems: list[str] = []
    rs = space.roots
    n = rs.rank
    if len(space.colors) != n:
        problems.append(f"expected one color spec per simple root ({n}), got {len(space.colors)}")
        return problems
    for i, spec in enumerate(space.colors):
        if spec.root_index != i:
            problems.append(f"color spec {i} carries root index {spec.root_index}")
        if spec.multiplicity not in (1, 2):
            problems.append(f"color over root {i}: multiplicity must be 1 or 2")
        if spec.exceptional:
            if spec.multiplicity != 2:
                problems.append(f"exceptional root {i} must have two colors")
            if not rs.is_root(vscale(2, rs.simple_root(i))):
                problems.append(f"exceptional root {i}: 2*alpha is not a restricted root")
    if len(space.lattice) != n or any(len(row) != n for row in space.lattice):
        problems.append("lattice basis must be a square rank x rank matrix")
        return problems
    try:
        inv = inverse(space.lattice)
    except ValueError:
        problems.append("lattice basis is singular")
        return problems
    if not all(is_integral(row) for row in space.lattice):
        problems.append("chi(S) is not contained in the spherical weight lattice")
    for i in range(n):
        coords = mat_vec(transpose(inv), rs.simple_root(i))
        if not is_integral(coords):
            problems.append(f"simple root {i} is not in chi(S) (root lattice not contained)")
    covered: set[int] = set()
    for part in space.factor_partition:
        if part.indices & covered:
            problems.append("factor partition parts overlap")
        covered |= part.indices
    if covered != set(range(n)):
        problems.append("factor partition does not cover all simple roots")
    comps = irreducible_factors(rs)
    for part in space.factor_partition:
        for comp in comps:
            if part.indices & comp and not comp <= part.indices:
                problems.append(f"factor part {sorted(part.indices)} splits an irreducible factor")
    for part in space.factor_partition:
        has_double = any(space.colors[i].multiplicity == 2 for i in part.indices)
        if has_double and not part.extra_color:
            problems.append(
                f"factor {sorted(part.indices)} has a two-color fibre, so |D| > rank on it"
            )
        if part.extra_color and not has_double:
            problems.append(
                f"factor {sorted(part.indices)} flagged extra_color but every fibre is a singleton"
            )
    return problems


def spherical_closure(space: SymmetricSpaceData) -> tuple[SymmetricSpaceData, tuple[bool, ...]]:
    """Combinatorial spherical closure.

    Factors with extra colors are already spherically closed and return
    unchanged (flag False); the remaining factors get their normalizer taken
    (flag True), which collapses any declared non-exceptional two-color
    fibres to a single color.  The output lattice is marked unresolved: only
    rational invariants survive the closure untouched.
    """
    flags = []
    new_colors = list(space.colors)
    for part in space.factor_partition:
        if part.extra_color:
            flags.append(False)
            continue
        flags.append(True)
        for i in sorted(part.indices):
            spec = new_colors[i]
            if spec.multiplicity == 2 and not spec.exceptional:
                new_colors[i] = ColorSpec(i, 1, False)
    closed = replace(
        space,
        colors=tuple(new_colors),
        lattice_unresolved=True,
        name=f"{space.name}^sph" if space.name else None,
    )
    return closed, tuple(flags)


# ---------------------------------------------------------------------------
# built-in example spaces


def _builtin() -> dict[str, SymmetricSpaceData]:
    spaces = {}
    spaces["A1-rank1"] = make_space(
        [("A", 1)], [[1]], [(0, 1, False)], [({0}, False)], name="A1-rank1"
    )
    spaces["A1-mult2"] = make_space(
        [("A", 1)], [[2]], [(0, 2, False)], [({0}, True)], name="A1-mult2"
    )
    spaces["BC1-exceptional"] = make_space(
        [("BC", 1)], [[1]], [(0, 2, True)], [({0}, True)], name="BC1-exceptional"
    )
    spaces["A1xA1"] = make_space(
        [("A", 1), ("A", 1)],
        [[1, 0], [0, 1]],
        [(0, 1, False), (1, 1, False)],
        [({0}, False), ({1}, False)],
        name="A1xA1",
    )
    spaces["A2"] = make_space(
        [("A", 2)],
        [[1, 0], [0, 1]],
        [(0, 1, False), (1, 1, False)],
        [({0, 1}, False)],
        name="A2",
    )
    spaces["A1xBC1"] = make_space(
        [("A", 1), ("BC", 1)],
        [[1, 0], [0, 1]],
        [(0, 1, False), (1, 2, True)],
        [({0}, False), ({1}, True)],
        name="A1xBC1",
    )
    spaces["A1xA1xA1"] = make_space(
        [("A", 1)] * 3,
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [(0, 1, False), (1, 1, False), (2, 1, False)],
        [({0}, False), ({1}, False), ({2}, False)],
        name="A1xA1xA1",
    )
    spaces["A2xA1"] = make_space(
        [("A", 2), ("A", 1)],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [(0, 1, False), (1, 1, False), (2, 1, False)],
        [({0, 1}, False), ({2}, False)],
        name="A2xA1",
    )
    return spaces


BUILTIN_SPACES = _builtin()


def builtin_space(name: str) -> SymmetricSpaceData:
    try:
        return BUILTIN_SPACES[name]
    except KeyError:
        raise ValueError(f"unknown built-in space {name!r}; have {sorted(BUILTIN_SPACES)}")
