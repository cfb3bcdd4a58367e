"""Plain data carried by a certified construction."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from .cover import BuildingData, CoverInvariants

if TYPE_CHECKING:
    from .canonical import CanonicalReport

__all__ = ["LineTag", "ComponentTag", "ImageDeclaration", "Recipe", "TransportStep", "ConstructionRecord"]


class LineTag(str, Enum):
    L6 = "2chi-6"
    L5 = "2chi-5"

    @property
    def offset(self) -> int:
        return 6 if self is LineTag.L6 else 5

    def K2(self, chi: int) -> int:
        return 2 * chi - self.offset

    @classmethod
    def parse(cls, text: str) -> LineTag:
        aliases = {"L6": cls.L6, "L5": cls.L5, "2chi-6": cls.L6, "2chi-5": cls.L5}
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(f"unknown line {text!r}; use 2chi-6 or 2chi-5") from None


class ComponentTag(str, Enum):
    ONLY = "Only"
    I = "I"  # noqa: E741
    II = "II"

    @classmethod
    def parse(cls, text: str) -> ComponentTag:
        t = text.strip()
        if t.lower() == "only":
            return cls.ONLY
        if t in ("I", "II"):
            return cls(t)
        raise ValueError(f"unknown component {text!r}; use only, I or II")


@dataclass(frozen=True)
class ImageDeclaration:
    """How a recipe reaches its canonical image.

    ``mode == "rule_table"``: through the intermediate double cover of
    branch index ``index``.  ``mode == "declared"``: through a tabulated
    class ``coeffs`` on the Hirzebruch surface F_m.
    """

    mode: str
    index: int | None = None
    m: int | None = None
    coeffs: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {"mode": self.mode, "index": self.index, "m": self.m,
                "coeffs": None if self.coeffs is None else list(self.coeffs)}


@dataclass(frozen=True)
class Recipe:
    name: str
    params: dict = field(default_factory=dict)
    # how the intermediate cover arises: two_points_of_fiber | negative_section_blowup | hirzebruch_f2
    intermediate: str | None = None
    image: ImageDeclaration | None = None


@dataclass(frozen=True)
class TransportStep:
    kind: str
    indices: tuple[int, ...]
    before: CoverInvariants
    after: CoverInvariants
    datum: BuildingData

    @property
    def delta(self) -> tuple[int, int]:
        return self.after.chi - self.before.chi, self.after.K2 - self.before.K2


@dataclass(frozen=True)
class ConstructionRecord:
    line: LineTag
    chi: int
    K2: int
    recipe: Recipe
    building_data: BuildingData
    invariants: CoverInvariants
    component: ComponentTag
    canonical: CanonicalReport | None = None
    z22_action: bool = True
    singular: tuple[BuildingData, CoverInvariants] | None = None
    transports: tuple[TransportStep, ...] = ()
    oracle: dict | None = None
    notes: tuple[str, ...] = ()
