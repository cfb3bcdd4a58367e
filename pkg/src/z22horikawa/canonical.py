"""Canonical class of a constructed cover: positivity, image, genus-2 pencil."""

from __future__ import annotations

from dataclasses import dataclass

from .cover import BuildingData, half_canonical_base_divisor, intermediate_double_cover
from .errors import ConstructionError, PreconditionError
from .linsys import MapImageKind, PositivityClass, Verdict, h0, map_image, positivity
from .picard import DivisorClass, lift, make_surface
from .records import ConstructionRecord

__all__ = [
    "H0Check",
    "Genus2Data",
    "CanonicalReport",
    "canonical_positivity",
    "canonical_image",
    "genus2_report",
    "fiber_genus",
    "canonical_report",
]


@dataclass(frozen=True)
class H0Check:
    expected: int
    computed: int

    @property
    def match(self) -> bool:
        return self.expected == self.computed


@dataclass(frozen=True)
class Genus2Data:
    fiber_base_class: DivisorClass
    contribution_sum: int

    def __post_init__(self):
        if self.contribution_sum < 0:
            raise ValueError("genus-2 contributions are nonnegative")


@dataclass(frozen=True)
class CanonicalReport:
    half2K: DivisorClass
    positivity: PositivityClass
    is_canonical_model: bool
    contracted_classes: tuple[DivisorClass, ...]
    image: MapImageKind
    image_h0_check: H0Check | None
    genus2: Genus2Data | None


def canonical_positivity(bd: BuildingData):
    """Positivity of K_X read off 2K_Y + B on the base.

    Returns ``(positivity, is_canonical_model, contracted_classes)``.  A
    finite surjective pullback preserves ampleness, so K_X is ample iff
    2K_Y + B is; when it is only nef, the witness curve is the base class
    whose reduced preimage gets contracted.
    """
    D = half_canonical_base_divisor(bd)
    pos = positivity(bd.base, D)
    ample = pos.verdict.is_ample
    contracted = (pos.witness,) if pos.verdict is Verdict.NEF_NOT_AMPLE else ()
    return pos, ample, contracted


def _expected_pg(rec: ConstructionRecord) -> int:
    inv = rec.invariants
    return inv.pg if inv.pg is not None else inv.chi - 1 + inv.q


def canonical_image(rec: ConstructionRecord) -> tuple[MapImageKind, H0Check]:
    decl = rec.recipe.image
    if decl is None:
        raise PreconditionError(f"recipe {rec.recipe.name} declares no canonical image route")
    expected = _expected_pg(rec)
    if decl.mode == "rule_table":
        ic = intermediate_double_cover(rec.building_data, decl.index)
        surface, divisor = ic.surface, ic.M
    elif decl.mode == "declared":
        surface = make_surface("hirzebruch", decl.m, names=("Sigma0", "G"))
        divisor = surface.cls(*decl.coeffs)
    else:
        raise PreconditionError(f"unknown image declaration mode {decl.mode!r}")
    check = H0Check(expected, h0(surface, divisor))
    if not check.match:
        raise ConstructionError(
            f"{rec.recipe.name}: h0({divisor} on {surface.descriptor()}) = {check.computed} but p_g = {expected}"
        )
    return map_image(surface, divisor), check


def fiber_genus(bd: BuildingData, fiber: DivisorClass) -> tuple[int, int]:
    """(number of components, genus of each) of the preimage of a general fiber.

    Riemann-Hurwitz for the Z2^2-cover of P^1 with D_i . F branch points
    of each type.
    """
    n = [d.dot(fiber) for d in bd.branch]
    nonzero = [x for x in n if x]
    if len(nonzero) >= 2:
        return 1, sum(n) - 3
    if len(nonzero) == 1:
        return 2, nonzero[0] // 2 - 1
    return 4, 0


def _fiber_class(bd: BuildingData) -> DivisorClass | None:
    root = bd.base.root
    if root.kind not in ("hirzebruch", "quadric"):
        return None
    return lift(root.generator(1), bd.base)


def genus2_report(rec: ConstructionRecord) -> Genus2Data | None:
    fiber = _fiber_class(rec.building_data)
    if fiber is None:
        return None
    _, genus = fiber_genus(rec.building_data, fiber)
    if genus != 2:
        return None
    inv = rec.invariants
    return Genus2Data(fiber, inv.K2 - 2 * inv.chi + 6)


def canonical_report(rec: ConstructionRecord) -> CanonicalReport:
    bd = rec.building_data
    pos, ample, contracted = canonical_positivity(bd)
    if rec.recipe.image is not None:
        image, check = canonical_image(rec)
    else:
        image, check = MapImageKind("Unsupported"), None
    return CanonicalReport(
        half2K=half_canonical_base_divisor(bd),
        positivity=pos,
        is_canonical_model=ample,
        contracted_classes=contracted,
        image=image,
        image_h0_check=check,
        genus2=genus2_report(rec),
    )
