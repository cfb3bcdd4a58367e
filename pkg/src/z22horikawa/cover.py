"""Building data of Z2^2-covers and everything computed from it.

Divisor indices are 1-based throughout (D1, D2, D3 and L1, L2, L3), with
the convention 2*L1 = D2 + D3, 2*L2 = D1 + D3 and L3 = L1 + L2 - D3.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import BuildingDataError, ParityObstruction, PreconditionError, RuleTableMiss
from .linsys import h0
from .picard import (
    DivisorClass,
    PointSpec,
    SurfaceModel,
    blow_up,
    exceptional_class,
    make_surface,
    pullback,
    root_part,
)

__all__ = [
    "Annotation",
    "BuildingData",
    "CoverInvariants",
    "ValidationReport",
    "IntermediateCover",
    "solve_bundle_data",
    "make_building_data",
    "validate_building_data",
    "invariants",
    "half_canonical_base_divisor",
    "intermediate_double_cover",
    "stacked_double_cover_oracle",
    "blow_up_cover_at_node",
    "resolve_triple_point",
]

ANNOTATION_KINDS = (
    "smooth",
    "contains_negative_section",
    "zero",
    "triple_point",
    "tangency",
    "fiber_pair",
    "contains_exceptional",
)


@dataclass(frozen=True)
class Annotation:
    kind: str
    at: PointSpec | None = None
    order: int | None = None

    def __post_init__(self):
        if self.kind not in ANNOTATION_KINDS:
            raise ValueError(f"unknown annotation {self.kind!r}")
        if self.kind in ("triple_point", "tangency") and self.at is None:
            raise ValueError(f"{self.kind} annotation needs a point")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "at": None if self.at is None else self.at.to_dict(),
            "order": self.order,
        }


@dataclass(frozen=True)
class BuildingData:
    base: SurfaceModel
    branch: tuple[DivisorClass, DivisorClass, DivisorClass]
    bundles: tuple[DivisorClass, DivisorClass, DivisorClass]
    annotations: tuple[tuple[Annotation, ...], ...] = ((), (), ())

    def D(self, i: int) -> DivisorClass:
        return self.branch[i - 1]

    def L(self, i: int) -> DivisorClass:
        return self.bundles[i - 1]

    def notes(self, i: int) -> tuple[Annotation, ...]:
        return self.annotations[i - 1]

    @property
    def total_branch(self) -> DivisorClass:
        D1, D2, D3 = self.branch
        return D1 + D2 + D3


@dataclass(frozen=True)
class CoverInvariants:
    K2: int
    chi: int
    pg: int | None
    q: int = 0

    def __post_init__(self):
        if self.pg is not None and self.chi != 1 - self.q + self.pg:
            raise ValueError(f"chi={self.chi} disagrees with 1 - q + pg = {1 - self.q + self.pg}")

    def to_dict(self) -> dict:
        return {"K2": self.K2, "chi": self.chi, "pg": self.pg, "q": self.q}


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    pairwise: dict[tuple[int, int], int]
    self_intersections: tuple[int, int, int]
    negative_components: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()


def _pair_label(i, j):
    return f"D{i}+D{j}"


def solve_bundle_data(base: SurfaceModel, D1: DivisorClass, D2: DivisorClass, D3: DivisorClass):
    """Halve the pairwise branch sums; raises :class:`ParityObstruction` if impossible."""
    for d in (D1, D2, D3):
        if d.surface != base:
            raise PreconditionError("branch classes must live on the base")
    s23, s13 = D2 + D3, D1 + D3
    if not s23.is_even():
        raise ParityObstruction(f"parity obstruction: {_pair_label(2, 3)} = {s23} is not divisible by 2")
    if not s13.is_even():
        raise ParityObstruction(f"parity obstruction: {_pair_label(1, 3)} = {s13} is not divisible by 2")
    L1, L2 = s23.half(), s13.half()
    return L1, L2, L1 + L2 - D3


def make_building_data(base: SurfaceModel, D1, D2, D3, annotations=None) -> BuildingData:
    bundles = solve_bundle_data(base, D1, D2, D3)
    notes = tuple(tuple(a) for a in annotations) if annotations is not None else ((), (), ())
    return BuildingData(base, (D1, D2, D3), bundles, notes)


def validate_building_data(bd: BuildingData) -> ValidationReport:
    D1, D2, D3 = bd.branch
    L1, L2, L3 = bd.bundles
    for c in bd.branch + bd.bundles:
        if c.surface != bd.base:
            raise BuildingDataError("all building-data classes must live on the base")
    if 2 * L1 != D2 + D3:
        raise BuildingDataError(f"2L1 = {2 * L1} differs from D2+D3 = {D2 + D3}")
    if 2 * L2 != D1 + D3:
        raise BuildingDataError(f"2L2 = {2 * L2} differs from D1+D3 = {D1 + D3}")
    if L3 != L1 + L2 - D3:
        raise BuildingDataError(f"L3 = {L3} differs from L1+L2-D3 = {L1 + L2 - D3}")

    pairwise = {(i, j): bd.D(i).dot(bd.D(j)) for i in (1, 2, 3) for j in (1, 2, 3) if i < j}
    selfs = tuple(d.self_intersection() for d in bd.branch)
    negative, warnings = [], []
    for i in (1, 2, 3):
        kinds = {a.kind for a in bd.notes(i)}
        if selfs[i - 1] < 0:
            negative.append(i)
            if "smooth" in kinds and "contains_negative_section" not in kinds and bd.D(i).surface.is_minimal:
                warnings.append(f"D{i} is annotated smooth but has negative square {selfs[i - 1]}")
        if "zero" in kinds and not bd.D(i).is_zero():
            raise BuildingDataError(f"D{i} is annotated zero but equals {bd.D(i)}")
    for (i, j), v in pairwise.items():
        if v < 0 and not ({"contains_negative_section", "contains_exceptional"}
                          & {a.kind for a in bd.notes(i) + bd.notes(j)}):
            warnings.append(f"D{i}.D{j} = {v} < 0 between branch components without a common fixed curve")
    return ValidationReport(True, pairwise, selfs, tuple(negative), tuple(warnings))


def half_canonical_base_divisor(bd: BuildingData) -> DivisorClass:
    """The class 2K_Y + D1 + D2 + D3, whose pullback is 2K_X."""
    return 2 * bd.base.canonical + bd.total_branch


def _h0_on_chain(D: DivisorClass) -> int | None:
    S = D.surface
    if S.is_minimal:
        return h0(S, D)
    base_part = root_part(D)
    exc = D.coeffs[S.root.rank:]
    if all(c >= 0 for c in exc):
        # exceptional curves are fixed components
        return h0(S.root, base_part)
    if h0(S.root, base_part) == 0:
        return 0
    return None


def invariants(bd: BuildingData) -> CoverInvariants:
    validate_building_data(bd)
    K = bd.base.canonical
    K2 = half_canonical_base_divisor(bd).self_intersection()
    twice = sum(L.dot(L + K) for L in bd.bundles)
    if twice % 2:
        raise BuildingDataError("sum of L_i(L_i + K_Y) is odd")
    chi = 4 * bd.base.chi_structure_sheaf + twice // 2
    counts = [_h0_on_chain(K + L) for L in bd.bundles]
    pg = None if any(c is None for c in counts) else sum(counts)
    return CoverInvariants(K2=K2, chi=chi, pg=pg, q=0)


@dataclass(frozen=True)
class IntermediateCover:
    """X1 -> Y, the double cover branched on the complementary pair of index i."""

    index: int
    surface: SurfaceModel
    class_map: tuple[tuple[int, ...], ...]
    branch: DivisorClass
    M: DivisorClass
    rule: str = field(default="")

    def push(self, D: DivisorClass) -> DivisorClass:
        """Pullback f2^* of a base class to X1."""
        cols = self.class_map
        coeffs = tuple(sum(D.coeffs[k] * cols[k][r] for k in range(len(cols)))
                       for r in range(self.surface.rank))
        return DivisorClass(self.surface, coeffs)


def _complement(i: int) -> tuple[int, int]:
    if i not in (1, 2, 3):
        raise PreconditionError("branch index must be 1, 2 or 3")
    j, k = [x for x in (1, 2, 3) if x != i]
    return j, k


def _match_rule(bd: BuildingData, i: int):
    j, k = _complement(i)
    Y = bd.base
    Dj, Dk = bd.D(j), bd.D(k)
    if Y.kind == "hirzebruch":
        fibers = [(0, 0), (0, 1), (0, 2)]
        if Dj.coeffs in fibers and Dk.coeffs in fibers and (Dj + Dk).coeffs == (0, 2):
            X1 = make_surface("hirzebruch", 2 * Y.e, names=("Gamma0", "G"))
            return X1, ((1, 0), (0, 2)), "fiber_pair"
    if Y.kind == "quadric":
        if Dj.coeffs == (1, 0) and Dk.coeffs == (1, 0):
            X1 = make_surface("quadric")
            return X1, ((2, 0), (0, 1)), "ruling_pair"
    raise RuleTableMiss(
        f"configuration not in rule table: D{j}={Dj}, D{k}={Dk} on {Y.descriptor()}"
    )


def intermediate_double_cover(bd: BuildingData, i: int) -> IntermediateCover:
    """Double cover X1 -> Y branched on the two branch divisors other than D_i.

    X is then the double cover of X1 branched on f2^*D_i, and
    K_X = f1^*(M) with M = K_X1 + f2^*D_i / 2.
    """
    validate_building_data(bd)
    X1, cmap, rule = _match_rule(bd, i)
    ic = IntermediateCover(i, X1, cmap, X1.zero(), X1.zero(), rule)
    branch = ic.push(bd.D(i))
    if not branch.is_even():
        raise RuleTableMiss(f"pulled-back branch {branch} is not divisible by 2 on {X1.descriptor()}")
    M = X1.canonical + branch.half()
    # Hurwitz: K_X1 = f2^*(K_Y + L_i)
    if ic.push(bd.base.canonical + bd.L(i)) != X1.canonical:
        raise BuildingDataError("ramification formula fails for the intermediate cover")
    return replace(ic, branch=branch, M=M)


def stacked_double_cover_oracle(bd: BuildingData, i: int) -> CoverInvariants:
    """Invariants of X obtained as two successive double covers Y <- X1 <- X.

    Uses only the double-cover formulas chi' = 2 chi + L(L+K)/2 and
    K'^2 = 2 (K + L)^2, the second step computed in X1's own lattice.
    """
    ic = intermediate_double_cover(bd, i)
    Y, X1 = bd.base, ic.surface
    KY, L = Y.canonical, bd.L(i)
    chi_X1 = 2 * Y.chi_structure_sheaf + Fraction(L.dot(L + KY), 2)
    K2_X1 = 2 * (KY + L).self_intersection()
    if chi_X1 != X1.chi_structure_sheaf or K2_X1 != X1.canonical.self_intersection():
        raise BuildingDataError(
            f"intermediate surface invariants ({chi_X1}, {K2_X1}) disagree with {X1.descriptor()}"
        )
    Lp, KX1 = ic.branch.half(), X1.canonical
    chi = 2 * chi_X1 + Fraction(Lp.dot(Lp + KX1), 2)
    K2 = 2 * (KX1 + Lp).self_intersection()
    if chi.denominator != 1:
        raise BuildingDataError("stacked cover has non-integral chi")
    pg = X1.irregularity + h0(X1, KX1 + Lp)
    return CoverInvariants(K2=K2, chi=int(chi), pg=pg, q=0)


def _transport(bd: BuildingData, point: PointSpec, shifts: dict[int, int], notes) -> BuildingData:
    S, q = blow_up(bd.base, point)
    E = exceptional_class(q)
    branch = tuple(pullback(q, bd.D(i)) + shifts[i] * E for i in (1, 2, 3))
    notes = [[n for n in notes[i - 1] if not (n.kind == "zero" and shifts[i])] for i in (1, 2, 3)]
    try:
        bundles = solve_bundle_data(S, *branch)
    except ParityObstruction as exc:  # impossible for valid input
        raise AssertionError(f"parity lost under transport: {exc}") from exc
    out = BuildingData(S, branch, bundles, tuple(tuple(n) for n in notes))
    validate_building_data(out)
    return out


def blow_up_cover_at_node(bd: BuildingData, i: int, j: int, at: PointSpec | None = None) -> BuildingData:
    """Blow up a transversal intersection point of D_i and D_j.

    The two divisors through the node lose E and the third gains it, so
    the new cover is the old one blown up at the point over the node.
    """
    if i == j or {i, j} - {1, 2, 3}:
        raise PreconditionError("node needs two distinct branch indices in 1..3")
    validate_building_data(bd)
    if bd.D(i).dot(bd.D(j)) < 1:
        raise PreconditionError(f"D{i}.D{j} = {bd.D(i).dot(bd.D(j))}: no intersection point to blow up")
    if at is None:
        at = PointSpec.intersection_of(i, j, bd.D(i), bd.D(j))
    for n in bd.notes(i) + bd.notes(j):
        if n.kind in ("triple_point", "tangency") and n.at == at:
            raise PreconditionError("point is annotated as a non-transversal singularity")
    (k,) = {1, 2, 3} - {i, j}
    shifts = {i: -1, j: -1, k: 1}
    notes = [list(bd.notes(x)) for x in (1, 2, 3)]
    notes[k - 1].append(Annotation("contains_exceptional"))
    return _transport(bd, at, shifts, notes)


def resolve_triple_point(bd: BuildingData, t: int, s: int, u: int) -> BuildingData:
    """Blow up an ordinary triple point of D_t that D_s meets with multiplicity 3.

    D_t -> b^*D_t - 3E, D_s -> b^*D_s - E, D_u -> b^*D_u + E; the
    resolved cover has chi and K^2 both one less.
    """
    if sorted((t, s, u)) != [1, 2, 3]:
        raise PreconditionError("t, s, u must be a permutation of 1, 2, 3")
    validate_building_data(bd)
    triple = [n for n in bd.notes(t) if n.kind == "triple_point"]
    if not triple:
        raise BuildingDataError(f"D{t} carries no triple_point annotation")
    p = triple[0].at
    if not any(n.kind == "tangency" and n.order == 3 and n.at == p for n in bd.notes(s)):
        raise BuildingDataError(f"D{s} is not annotated as meeting D{t} with multiplicity 3 at the triple point")
    if any(n.at == p for n in bd.notes(u)):
        raise BuildingDataError(f"D{u} must miss the triple point")
    shifts = {t: -3, s: -1, u: 1}
    notes = [[n for n in bd.notes(x) if n.at != p] for x in (1, 2, 3)]
    notes[u - 1].append(Annotation("contains_exceptional"))
    return _transport(bd, p, shifts, notes)
