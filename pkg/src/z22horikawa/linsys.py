"""Sections, positivity and images of complete linear systems.

Only minimal rational bases get an ``h0``; on those the count is the number
of lattice points in the section polygon.  Positivity is exact on minimal
bases and on one-point blow-ups of Hirzebruch surfaces, where the test
runs against the fixed list of extremal curves {E, F - E, Delta0 or
Delta0 - E}.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import PreconditionError, UnsupportedBaseError
from .picard import DivisorClass, SurfaceModel, blowup_map, exceptional_class, pullback

__all__ = [
    "Verdict",
    "PositivityClass",
    "MapImageKind",
    "h0",
    "positivity",
    "map_image",
]


class Verdict(str, Enum):
    VERY_AMPLE = "VeryAmple"
    AMPLE_NOT_VERY_AMPLE = "AmpleNotVeryAmple"
    NEF_NOT_AMPLE = "NefNotAmple"
    NOT_NEF = "NotNef"

    @property
    def is_ample(self) -> bool:
        return self in (Verdict.VERY_AMPLE, Verdict.AMPLE_NOT_VERY_AMPLE)

    @property
    def is_nef(self) -> bool:
        return self is not Verdict.NOT_NEF


@dataclass(frozen=True)
class PositivityClass:
    verdict: Verdict
    witness: DivisorClass | None = None

    def __post_init__(self):
        if self.verdict in (Verdict.NEF_NOT_AMPLE, Verdict.NOT_NEF) and self.witness is None:
            raise ValueError(f"{self.verdict.value} needs a witness curve")


@dataclass(frozen=True)
class MapImageKind:
    kind: str
    m: int | None = None

    KINDS = ("ProjectivePlaneImage", "QuadricImage", "HirzebruchImage", "ConeImage", "Unsupported")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown image kind {self.kind!r}")
        if self.kind == "ConeImage" and (self.m is None or self.m < 2):
            raise ValueError("ConeImage(m) requires m >= 2")
        if self.kind == "HirzebruchImage" and (self.m is None or self.m < 0):
            raise ValueError("HirzebruchImage(m) requires m >= 0")

    def __str__(self):
        return f"{self.kind}({self.m})" if self.m is not None else self.kind

    @classmethod
    def parse(cls, text: str) -> MapImageKind:
        if "(" in text:
            name, arg = text.rstrip(")").split("(")
            return cls(name, int(arg))
        return cls(text)

    @property
    def supported(self) -> bool:
        return self.kind != "Unsupported"


PLANE = MapImageKind("ProjectivePlaneImage")
QUADRIC = MapImageKind("QuadricImage")
UNSUPPORTED = MapImageKind("Unsupported")


def h0(S: SurfaceModel, D: DivisorClass) -> int:
    """Number of independent global sections of O(D) on a minimal base."""
    if D.surface != S:
        raise PreconditionError("class does not live on the given surface")
    if S.kind == "plane":
        (d,) = D.coeffs
        return (d + 1) * (d + 2) // 2 if d >= 0 else 0
    if S.kind == "quadric":
        a, b = D.coeffs
        return (a + 1) * (b + 1) if a >= 0 and b >= 0 else 0
    if S.kind == "hirzebruch":
        a, b = D.coeffs
        if a < 0:
            return 0
        return sum(max(0, b - j * S.e + 1) for j in range(a + 1))
    raise UnsupportedBaseError(f"unsupported base {S.descriptor()} for h0")


def _minimal_positivity(S: SurfaceModel, D: DivisorClass) -> PositivityClass:
    if S.kind == "plane":
        (d,) = D.coeffs
        H = S.generator(0)
        if d < 0:
            return PositivityClass(Verdict.NOT_NEF, H)
        if d == 0:
            return PositivityClass(Verdict.NEF_NOT_AMPLE, H)
        return PositivityClass(Verdict.VERY_AMPLE)

    a, b = D.coeffs
    delta0, fiber = S.generator(0), S.generator(1)
    e = 0 if S.kind == "quadric" else S.e
    # the two extremal curves are Delta0 (D.Delta0 = b - ae) and F (D.F = a)
    on_delta, on_fiber = b - a * e, a
    if on_fiber < 0:
        return PositivityClass(Verdict.NOT_NEF, fiber)
    if on_delta < 0:
        return PositivityClass(Verdict.NOT_NEF, delta0)
    if on_fiber == 0:
        return PositivityClass(Verdict.NEF_NOT_AMPLE, fiber)
    if on_delta == 0:
        return PositivityClass(Verdict.NEF_NOT_AMPLE, delta0)
    return PositivityClass(Verdict.VERY_AMPLE)


def _blowup_positivity(S: SurfaceModel, D: DivisorClass) -> PositivityClass:
    q = blowup_map(S)
    base = q.parent
    if base.kind != "hirzebruch":
        raise UnsupportedBaseError(f"positivity on {S.descriptor()} is not supported")
    E = exceptional_class(q)
    delta0 = base.generator(0)
    fiber_strict = pullback(q, base.generator(1)) - E
    if S.point.lies_on(delta0.coeffs):
        delta_curve = pullback(q, delta0) - E
    else:
        delta_curve = pullback(q, delta0)
    curves = [E, fiber_strict, delta_curve]
    values = [D.dot(c) for c in curves]

    pushed = _minimal_positivity(base, DivisorClass(base, D.coeffs[:-1]))
    for v, c in zip(values, curves):
        if v < 0:
            return PositivityClass(Verdict.NOT_NEF, c)
    if not pushed.verdict.is_nef:
        return PositivityClass(Verdict.NOT_NEF, pullback(q, pushed.witness))
    for v, c in zip(values, curves):
        if v == 0:
            return PositivityClass(Verdict.NEF_NOT_AMPLE, c)
    if D.self_intersection() <= 0:
        return PositivityClass(Verdict.NEF_NOT_AMPLE, D)
    # very ampleness is not decided on blow-ups
    return PositivityClass(Verdict.AMPLE_NOT_VERY_AMPLE)


def positivity(S: SurfaceModel, D: DivisorClass) -> PositivityClass:
    """Classify D as very ample, ample, nef or not nef.

    On F_e ampleness and very ampleness coincide.  On a one-point blow-up
    of F_e the verdict is capped at ``AmpleNotVeryAmple``; deeper chains
    raise :class:`UnsupportedBaseError`.
    """
    if D.surface != S:
        raise PreconditionError("class does not live on the given surface")
    if S.is_minimal:
        return _minimal_positivity(S, D)
    if S.blowup_depth == 1:
        return _blowup_positivity(S, D)
    raise UnsupportedBaseError(f"positivity on {S.descriptor()} (depth {S.blowup_depth}) is not supported")


def map_image(S: SurfaceModel, D: DivisorClass) -> MapImageKind:
    """Image of S under the map given by |D|."""
    pos = positivity(S, D)
    n = h0(S, D)
    if not pos.verdict.is_nef or n < 3:
        raise PreconditionError(f"map_image needs D nef with h0 >= 3 (got {pos.verdict.value}, h0={n})")
    if S.kind == "plane":
        return PLANE if D.coeffs == (1,) else UNSUPPORTED
    a, b = D.coeffs
    if S.kind == "quadric":
        return QUADRIC if a >= 1 and b >= 1 else UNSUPPORTED
    m = S.e
    if a > 0 and b > a * m:
        return MapImageKind("HirzebruchImage", m)
    if a == 1 and b == m:
        # |Delta0 + mF| contracts Delta0; for m = 1 the "cone" is the plane itself
        return MapImageKind("ConeImage", m) if m >= 2 else PLANE
    return UNSUPPORTED
