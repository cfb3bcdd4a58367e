"""Picard lattices of P^2, P^1 x P^1, Hirzebruch surfaces and their blow-ups.

Every surface carries an ordered basis of named generators, an integral
symmetric Gram matrix and a canonical class.  Divisor classes are integer
coefficient vectors over that basis.  Blow-ups append one exceptional
generator per step; earlier generators are identified with their total
transforms, so pulling a class back just appends a zero coefficient.

Examples
--------
>>> F2 = make_surface("hirzebruch", e=2)
>>> D = F2.cls(1, 2)
>>> intersect(D, D)
2
>>> S, q = blow_up(F2, PointSpec.general())
>>> exceptional_class(q).self_intersection()
-1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PreconditionError, SurfaceMismatchError

__all__ = [
    "PointSpec",
    "SurfaceModel",
    "DivisorClass",
    "BlowUpMap",
    "make_surface",
    "intersect",
    "blow_up",
    "pullback",
    "exceptional_class",
    "pushforward",
    "surface_to_dict",
    "surface_from_dict",
    "divisor_to_dict",
    "divisor_from_dict",
    "root_part",
    "lift",
    "blowup_map",
    "plane_blowup_to_f1",
]

_LOCATIONS = ("general", "on_divisor", "intersection_of", "infinitely_near")


@dataclass(frozen=True)
class PointSpec:
    """Symbolic description of a point to be blown up.

    No coordinates are ever attached.  ``classes`` lists coefficient vectors
    (on the surface being blown up) of curves declared to pass through the
    point; ``indices`` names branch divisors meeting there, when relevant.
    """

    location: str = "general"
    classes: tuple[tuple[int, ...], ...] = ()
    indices: tuple[int, ...] = ()
    previous: PointSpec | None = None
    multiplicity_assumptions: tuple[tuple[int, int], ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.location not in _LOCATIONS:
            raise PreconditionError(f"unknown point location {self.location!r}")
        if (self.location == "infinitely_near") != (self.previous is not None):
            raise PreconditionError("infinitely_near points need exactly one previous point")
        if self.location == "intersection_of" and len(self.indices) != 2:
            raise PreconditionError("intersection_of needs two divisor indices")
        for _, mult in self.multiplicity_assumptions:
            if mult < 0:
                raise PreconditionError("multiplicities must be nonnegative")

    @classmethod
    def general(cls, label: str = "") -> PointSpec:
        return cls(label=label)

    @classmethod
    def on_divisor(cls, *divisors: DivisorClass, label: str = "", multiplicities=()) -> PointSpec:
        return cls(
            location="on_divisor",
            classes=tuple(d.coeffs for d in divisors),
            multiplicity_assumptions=tuple(multiplicities),
            label=label,
        )

    @classmethod
    def intersection_of(cls, i: int, j: int, Di: DivisorClass, Dj: DivisorClass, label: str = "") -> PointSpec:
        return cls(
            location="intersection_of",
            classes=(Di.coeffs, Dj.coeffs),
            indices=(i, j),
            multiplicity_assumptions=((i, 1), (j, 1)),
            label=label,
        )

    @classmethod
    def infinitely_near(cls, previous: PointSpec, *through: DivisorClass, label: str = "") -> PointSpec:
        return cls(
            location="infinitely_near",
            classes=tuple(d.coeffs for d in through),
            previous=previous,
            label=label,
        )

    def lies_on(self, coeffs: Sequence[int]) -> bool:
        """True if a curve with these coefficients is declared through the point."""
        return tuple(coeffs) in self.classes

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "classes": [list(c) for c in self.classes],
            "indices": list(self.indices),
            "previous": None if self.previous is None else self.previous.to_dict(),
            "multiplicity_assumptions": [list(m) for m in self.multiplicity_assumptions],
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: dict) -> PointSpec:
        prev = data.get("previous")
        return cls(
            location=data["location"],
            classes=tuple(tuple(c) for c in data.get("classes", ())),
            indices=tuple(data.get("indices", ())),
            previous=None if prev is None else cls.from_dict(prev),
            multiplicity_assumptions=tuple(tuple(m) for m in data.get("multiplicity_assumptions", ())),
            label=data.get("label", ""),
        )


@dataclass(frozen=True)
class SurfaceModel:
    """A rational surface together with its Picard lattice.

    ``kind`` is one of ``"plane"``, ``"quadric"``, ``"hirzebruch"`` or
    ``"blowup"``.  Basis names are cosmetic and excluded from equality, so
    a Hirzebruch surface written with generators (Gamma0, G) equals the
    same surface written with (D0, F).
    """

    kind: str
    e: int | None
    gram: tuple[tuple[int, ...], ...]
    canonical_coeffs: tuple[int, ...]
    parent: SurfaceModel | None = None
    point: PointSpec | None = None
    basis: tuple[str, ...] = field(default=(), compare=False)

    chi_structure_sheaf = 1
    irregularity = 0

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def canonical(self) -> DivisorClass:
        return DivisorClass(self, self.canonical_coeffs)

    @property
    def root(self) -> SurfaceModel:
        """The minimal surface at the bottom of the blow-up chain."""
        s = self
        while s.parent is not None:
            s = s.parent
        return s

    @property
    def blowup_depth(self) -> int:
        return self.rank - self.root.rank

    @property
    def is_minimal(self) -> bool:
        return self.kind != "blowup"

    def blowup_points(self) -> list[PointSpec]:
        pts = []
        s = self
        while s.parent is not None:
            pts.append(s.point)
            s = s.parent
        return pts[::-1]

    def cls(self, *coeffs: int) -> DivisorClass:
        return DivisorClass(self, tuple(coeffs))

    def zero(self) -> DivisorClass:
        return DivisorClass(self, (0,) * self.rank)

    def generator(self, name_or_index) -> DivisorClass:
        idx = self.basis.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        v = [0] * self.rank
        v[idx] = 1
        return DivisorClass(self, tuple(v))

    def renamed(self, names: Sequence[str]) -> SurfaceModel:
        """Same surface, different generator names (e.g. Sigma0, G)."""
        if len(names) != self.rank:
            raise PreconditionError("basis name count must equal the rank")
        return SurfaceModel(self.kind, self.e, self.gram, self.canonical_coeffs,
                            self.parent, self.point, tuple(names))

    def descriptor(self) -> str:
        if self.kind == "plane":
            return "P2"
        if self.kind == "quadric":
            return "P1xP1"
        if self.kind == "hirzebruch":
            return f"F{self.e}"
        return f"Bl{self.blowup_depth}({self.root.descriptor()})"

    def __repr__(self):
        return f"SurfaceModel({self.descriptor()})"


@dataclass(frozen=True)
class DivisorClass:
    surface: SurfaceModel
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.surface.rank:
            raise PreconditionError(
                f"class has {len(self.coeffs)} coefficients, surface {self.surface.descriptor()} "
                f"has rank {self.surface.rank}"
            )
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def _check(self, other: DivisorClass):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if other.surface != self.surface:
            raise SurfaceMismatchError(
                f"classes live on {self.surface.descriptor()} and {other.surface.descriptor()}"
            )
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.surface, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.surface, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.surface, tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(self.surface, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def dot(self, other: DivisorClass) -> int:
        return intersect(self, other)

    def self_intersection(self) -> int:
        return intersect(self, self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_even(self) -> bool:
        return all(c % 2 == 0 for c in self.coeffs)

    def half(self) -> DivisorClass:
        if not self.is_even():
            raise ValueError(f"{self} is not divisible by 2")
        return DivisorClass(self.surface, tuple(c // 2 for c in self.coeffs))

    def __str__(self):
        names = self.surface.basis or tuple(f"e{i}" for i in range(self.surface.rank))
        terms = []
        for c, n in zip(self.coeffs, names):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, f"{mag}{n}"))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out

    def __repr__(self):
        return f"DivisorClass({self}, on {self.surface.descriptor()})"


@dataclass(frozen=True)
class BlowUpMap:
    """The contraction q: child -> parent of one exceptional curve."""

    parent: SurfaceModel
    child: SurfaceModel

    @property
    def point(self) -> PointSpec:
        return self.child.point


def _gram_plane():
    return ((1,),)


def make_surface(kind: str, e: int | None = None, names: Sequence[str] | None = None) -> SurfaceModel:
    """Build P^2 (``"plane"``), P^1 x P^1 (``"quadric"``) or F_e (``"hirzebruch"``)."""
    if kind == "plane":
        s = SurfaceModel("plane", None, _gram_plane(), (-3,), basis=("H",))
    elif kind == "quadric":
        s = SurfaceModel("quadric", None, ((0, 1), (1, 0)), (-2, -2), basis=("D0", "F"))
    elif kind == "hirzebruch":
        if e is None or e < 0:
            raise PreconditionError("Hirzebruch surfaces need e >= 0")
        s = SurfaceModel("hirzebruch", int(e), ((-e, 1), (1, 0)), (-2, -(e + 2)), basis=("D0", "F"))
    else:
        raise PreconditionError(f"unknown surface kind {kind!r}")
    return s.renamed(names) if names is not None else s


def intersect(D: DivisorClass, Dp: DivisorClass) -> int:
    if D.surface != Dp.surface:
        raise SurfaceMismatchError(
            f"classes live on {D.surface.descriptor()} and {Dp.surface.descriptor()}"
        )
    g = D.surface.gram
    return sum(a * g[i][j] * b for i, a in enumerate(D.coeffs) if a
               for j, b in enumerate(Dp.coeffs) if b)


def blow_up(S: SurfaceModel, p: PointSpec | None = None) -> tuple[SurfaceModel, BlowUpMap]:
    p = p if p is not None else PointSpec.general()
    n = S.rank
    gram = tuple(row + (0,) for row in S.gram) + ((0,) * n + (-1,),)
    names = S.basis + (f"E{S.blowup_depth + 1}",)
    child = SurfaceModel("blowup", None, gram, S.canonical_coeffs + (1,), S, p, names)
    return child, BlowUpMap(S, child)


def pullback(m: BlowUpMap, D: DivisorClass) -> DivisorClass:
    if D.surface != m.parent:
        raise SurfaceMismatchError("pullback expects a class on the blown-up surface's parent")
    return DivisorClass(m.child, D.coeffs + (0,))


def exceptional_class(m: BlowUpMap) -> DivisorClass:
    return m.child.generator(m.child.rank - 1)


def pushforward(m: BlowUpMap, D: DivisorClass) -> DivisorClass:
    """Image class on the parent (drops the exceptional coefficient)."""
    if D.surface != m.child:
        raise SurfaceMismatchError("pushforward expects a class on the blow-up")
    return DivisorClass(m.parent, D.coeffs[:-1])


def root_part(D: DivisorClass) -> DivisorClass:
    """Push a class on an iterated blow-up all the way down to the minimal surface."""
    root = D.surface.root
    return DivisorClass(root, D.coeffs[: root.rank])


def lift(D: DivisorClass, target: SurfaceModel) -> DivisorClass:
    """Total transform of a class on some surface of ``target``'s chain."""
    s = target
    while s is not None and s != D.surface:
        s = s.parent
    if s is None:
        raise SurfaceMismatchError(f"{D.surface.descriptor()} is not below {target.descriptor()}")
    return DivisorClass(target, D.coeffs + (0,) * (target.rank - D.surface.rank))


def blowup_map(S: SurfaceModel) -> BlowUpMap:
    if S.parent is None:
        raise PreconditionError(f"{S.descriptor()} is not a blow-up")
    return BlowUpMap(S.parent, S)


# --- canonical JSON form -------------------------------------------------

def surface_to_dict(S: SurfaceModel) -> dict:
    root = S.root
    chain = S.blowup_points()
    return {
        "kind": root.kind,
        "e": root.e,
        "basis": list(S.basis),
        "blowups": [p.to_dict() for p in chain],
    }


def surface_from_dict(data: dict) -> SurfaceModel:
    s = make_surface(data["kind"], data.get("e"))
    base_names = data.get("basis")
    if base_names:
        s = s.renamed(base_names[: s.rank])
    for pd in data.get("blowups", ()):
        s, _ = blow_up(s, PointSpec.from_dict(pd))
    if base_names:
        s = s.renamed(base_names)
    return s


def divisor_to_dict(D: DivisorClass) -> dict:
    return {"surface": surface_to_dict(D.surface), "coeffs": list(D.coeffs)}


def divisor_from_dict(data: dict) -> DivisorClass:
    return DivisorClass(surface_from_dict(data["surface"]), tuple(data["coeffs"]))


def classes(S: SurfaceModel, vectors: Iterable[Sequence[int]]) -> list[DivisorClass]:
    return [DivisorClass(S, tuple(v)) for v in vectors]


def plane_blowup_to_f1(D: DivisorClass) -> DivisorClass:
    """Rewrite a class on Bl_p P^2 in the basis (D0, F) of F_1.

    The exceptional curve is the negative section and H - E the fiber, so
    hH + xE = (h + x) D0 + h F.
    """
    S = D.surface
    if S.kind != "blowup" or S.parent is None or S.parent.kind != "plane":
        raise PreconditionError("expected a class on a one-point blow-up of P^2")
    h, x = D.coeffs
    return make_surface("hirzebruch", 1).cls(h + x, h)
