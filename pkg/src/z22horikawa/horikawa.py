"""Geography and moduli components on the two Horikawa lines.

:func:`construct` builds a certified Z2^2-cover for every (line, chi,
component).  The component counts and canonical-image tables of Horikawa's
classification are used as lookup rules, not re-proved.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import canonical as _canonical
from .cover import (
    Annotation,
    BuildingData,
    blow_up_cover_at_node,
    invariants,
    make_building_data,
    resolve_triple_point,
    stacked_double_cover_oracle,
    validate_building_data,
)
from .errors import ClassificationError, ConstructionError, PreconditionError, Z22Error
from .linsys import MapImageKind
from .picard import PointSpec, make_surface
from .records import ComponentTag, ConstructionRecord, ImageDeclaration, LineTag, Recipe, TransportStep

__all__ = [
    "admissible",
    "component_count",
    "components_for",
    "construct",
    "classify",
    "verify_theorem",
    "VerificationReport",
    "KSBA_NOTE",
]

KSBA_NOTE = (
    "singular model: elliptic singularity over the triple point; KSBA-stable, "
    "smoothable by deforming the branch divisors within their classes"
)


SMOOTH = Annotation("smooth")
NEG = Annotation("contains_negative_section")
ZERO = Annotation("zero")
FIBERS = Annotation("fiber_pair")


def admissible(chi: int, K2: int) -> bool:
    return chi >= 1 and K2 >= 1 and 2 * chi - 6 <= K2 <= 9 * chi


def _min_chi(line: LineTag) -> int:
    return 4 if line is LineTag.L6 else 3


def component_count(line: LineTag, chi: int) -> int:
    if chi < _min_chi(line):
        raise PreconditionError(f"chi={chi} is below the range of line {line.value}")
    K2 = line.K2(chi)
    if line is LineTag.L6:
        return 2 if K2 % 8 == 0 else 1
    return 2 if (K2 + 1) % 8 == 0 or (chi, K2) == (7, 9) else 1


def components_for(line: LineTag, chi: int) -> list[ComponentTag]:
    if component_count(line, chi) == 1:
        return [ComponentTag.ONLY]
    return [ComponentTag.I, ComponentTag.II]


# --- recipes ---------------------------------------------------------------

def _l6_f2(chi):
    Y = make_surface("hirzebruch", 2)
    bd = make_building_data(Y, Y.cls(1, 0), Y.cls(1, 2), Y.cls(3, chi + 4),
                            [(SMOOTH, NEG), (SMOOTH,), (SMOOTH,)])
    return Recipe("L6_F2", {"chi": chi}), bd


def _l6_quadric(chi):
    Y = make_surface("quadric")
    bd = make_building_data(Y, Y.cls(1, 0), Y.cls(1, 0), Y.cls(3, chi + 1),
                            [(SMOOTH, FIBERS), (SMOOTH, FIBERS), (SMOOTH,)])
    return Recipe("L6_Quadric", {"chi": chi}, image=ImageDeclaration("rule_table", index=3)), bd


def _fiber_pair(Y, odd: bool):
    """D1 + D2 = 2F as two disjoint fibers; split according to the parity needed."""
    if odd:
        return Y.cls(0, 1), Y.cls(0, 1), [(SMOOTH, FIBERS), (SMOOTH, FIBERS)]
    return Y.zero(), Y.cls(0, 2), [(ZERO,), (SMOOTH, FIBERS)]


def _l6_fe(e):
    Y = make_surface("hirzebruch", e)
    D1, D2, notes = _fiber_pair(Y, odd=e % 2 == 1)
    bd = make_building_data(Y, D1, D2, Y.cls(6, 5 * e), notes + [(NEG,)])
    return Recipe("L6_Fe", {"e": e}, image=ImageDeclaration("rule_table", index=3)), bd


def _l5_f3(chi, name="L5_F3", **kw):
    Y = make_surface("hirzebruch", 3)
    bd = make_building_data(Y, Y.cls(1, 0), Y.cls(1, 4), Y.cls(3, chi + 5),
                            [(SMOOTH, NEG), (SMOOTH,), (SMOOTH,)])
    return Recipe(name, {"chi": chi}, **kw), bd


def _plane(d3, name):
    Y = make_surface("plane")
    bd = make_building_data(Y, Y.cls(1), Y.cls(1), Y.cls(d3), [(SMOOTH,)] * 3)
    return name, bd


def _l5_f1(chi):
    Y = make_surface("hirzebruch", 1)
    bd = make_building_data(Y, Y.cls(1, 0), Y.cls(1, 2), Y.cls(3, chi + 2),
                            [(SMOOTH, NEG), (SMOOTH,), (SMOOTH,)])
    decl = ImageDeclaration("declared", m=1, coeffs=(1, (chi - 2) // 2))
    return Recipe("L5_F1", {"chi": chi}, intermediate="two_points_of_fiber", image=decl), bd


def _l5_fk_singular(k):
    e = k + 1
    Y = make_surface("hirzebruch", e)
    D1, D2, notes = _fiber_pair(Y, odd=k % 2 == 0)
    D3 = Y.cls(6, 5 * e)
    p = PointSpec.on_divisor(D2, D3, label="p", multiplicities=((2, 1), (3, 3)))
    notes[1] = notes[1] + (Annotation("tangency", at=p, order=3),)
    notes.append((NEG, Annotation("triple_point", at=p)))
    bd = make_building_data(Y, D1, D2, D3, notes)
    decl = ImageDeclaration("declared", m=2 * k + 1, coeffs=(1, 3 * k))
    return Recipe("L5_Fk", {"k": k}, intermediate="two_points_of_fiber", image=decl), bd, p


def _step(kind, indices, before_bd, after_bd):
    return TransportStep(kind, indices, invariants(before_bd), invariants(after_bd), after_bd)


def _build(line: LineTag, chi: int, component: ComponentTag):
    """Recipe dispatch.  Returns (recipe, main datum, singular, transports, notes)."""
    K2 = line.K2(chi)
    singular, steps, notes = None, [], []
    if line is LineTag.L6:
        if chi % 2 == 0:
            recipe, bd = _l6_f2(chi)
        elif component is ComponentTag.II:
            recipe, bd = _l6_fe((K2 + 8) // 8)
        else:
            recipe, bd = _l6_quadric(chi)
        return recipe, bd, singular, steps, notes

    if (chi, K2) == (7, 9):
        if component is ComponentTag.I:
            recipe, bd = _l5_f3(chi, "L5_79_F3", intermediate="two_points_of_fiber",
                                image=ImageDeclaration("declared", m=2, coeffs=(1, 3)))
        else:
            name, bd = _plane(7, "L5_79_P2")
            recipe = Recipe(name, {}, intermediate="hirzebruch_f2",
                            image=ImageDeclaration("declared", m=2, coeffs=(1, 3)))
        steps.append(_step("node", (1, 2), bd, blow_up_cover_at_node(bd, 1, 2)))
    elif component is ComponentTag.II:
        k = (K2 + 1) // 8
        recipe, sing, p = _l5_fk_singular(k)
        bd = resolve_triple_point(sing, t=3, s=2, u=1)
        singular = (sing, invariants(sing))
        steps.append(_step("triple_point", (3, 2, 1), sing, bd))
        pp = PointSpec.infinitely_near(p, label="p'")
        steps.append(_step("node", (1, 2), bd, blow_up_cover_at_node(bd, 1, 2, at=pp)))
        notes.append(KSBA_NOTE)
    elif chi == 3:
        name, bd = _plane(5, "L5_P2_31")
        recipe = Recipe(name, {})
    elif chi % 2 == 1:
        recipe, bd = _l5_f3(chi)
    else:
        recipe, bd = _l5_f1(chi)
        steps.append(_step("node", (1, 2), bd, blow_up_cover_at_node(bd, 1, 2)))
    return recipe, bd, singular, steps, notes


def _oracle_checks(rec: ConstructionRecord) -> dict:
    inv, line = rec.invariants, rec.line
    checks = {
        "building_data_valid": validate_building_data(rec.building_data).valid,
        "invariants_match": (inv.chi, inv.K2) == (rec.chi, rec.K2),
        "line_relation": inv.K2 == line.K2(inv.chi),
        "chi_pg": inv.pg is None or inv.chi == 1 - inv.q + inv.pg,
    }
    if rec.recipe.image is not None and rec.recipe.image.mode == "rule_table":
        stacked = stacked_double_cover_oracle(rec.building_data, rec.recipe.image.index)
        checks["stacked_double_cover"] = stacked == inv
    for step in rec.transports:
        want = (0, -1) if step.kind == "node" else (-1, -1)
        key = f"{step.kind}_transport"
        checks[key] = checks.get(key, True) and step.delta == want
    if rec.singular is not None:
        k = rec.recipe.params["k"]
        sing = rec.singular[1]
        checks["singular_invariants"] = (sing.chi, sing.K2) == (4 * k + 3, 8 * k)
    can = rec.canonical
    if can is not None:
        if can.image_h0_check is not None:
            checks["image_h0"] = can.image_h0_check.match
        if can.genus2 is not None:
            want = 0 if line is LineTag.L6 else 1
            checks["genus2_identity"] = can.genus2.contribution_sum == inv.K2 - 2 * inv.chi + 6 == want
    return checks


def construct(line: LineTag, chi: int, component: ComponentTag = ComponentTag.ONLY,
              oracle: bool = True) -> ConstructionRecord:
    line, component = LineTag(line), ComponentTag(component)
    if chi < _min_chi(line):
        raise ConstructionError(f"chi must be at least {_min_chi(line)} on line {line.value}")
    K2 = line.K2(chi)
    if not admissible(chi, K2):
        raise ConstructionError(f"({chi}, {K2}) is not an admissible pair")
    allowed = components_for(line, chi)
    if component not in allowed:
        if allowed == [ComponentTag.ONLY]:
            raise ConstructionError(
                f"({chi}, {K2}) has a single component; component {component.value} does not exist"
            )
        raise ConstructionError(f"({chi}, {K2}) has two components; request I or II, not {component.value}")

    recipe, bd, singular, steps, notes = _build(line, chi, component)
    inv = invariants(bd)
    if (inv.chi, inv.K2) != (chi, K2):
        raise AssertionError(f"{recipe.name} produced ({inv.chi}, {inv.K2}) instead of ({chi}, {K2})")
    rec = ConstructionRecord(line, chi, K2, recipe, bd, inv, component,
                             singular=singular, transports=tuple(steps), notes=tuple(notes))
    rec = replace(rec, canonical=_canonical.canonical_report(rec))
    found = classify(rec)
    if found is not component:
        raise AssertionError(f"{recipe.name} classified as {found.value}, expected {component.value}")
    if oracle:
        rec = replace(rec, oracle=_oracle_checks(rec))
    return rec


def _hirzebruch_index(image: MapImageKind) -> int | None:
    if image.kind == "HirzebruchImage":
        return image.m
    if image.kind == "QuadricImage":
        return 0
    return None


def classify(rec: ConstructionRecord) -> ComponentTag:
    """Component of a record, read off its canonical image (and intermediate cover)."""
    if component_count(rec.line, rec.chi) == 1:
        return ComponentTag.ONLY
    if rec.canonical is None or not rec.canonical.image.supported:
        raise ClassificationError(f"{rec.recipe.name}: canonical image is unsupported, cannot classify")
    image, K2 = rec.canonical.image, rec.K2
    m = _hirzebruch_index(image)
    src = rec.recipe.intermediate

    if rec.line is LineTag.L6:
        if m is not None and m % 2 == 0 and m <= K2 // 4:
            return ComponentTag.I
        if m == K2 // 4 + 2:
            return ComponentTag.II
        if K2 == 8 and (image.kind == "ProjectivePlaneImage" or image == MapImageKind("ConeImage", 4)):
            return ComponentTag.II
    elif (rec.chi, K2) == (6, 7):
        if image == MapImageKind("ConeImage", 3) or (m == 1 and src == "negative_section_blowup"):
            return ComponentTag.II
        if m == 1 and src == "two_points_of_fiber":
            return ComponentTag.I
    elif (rec.chi, K2) == (7, 9):
        if m == 2 and src == "hirzebruch_f2":
            return ComponentTag.II
        if m in (0, 2) and src == "two_points_of_fiber":
            return ComponentTag.I
    else:
        if m is not None and m % 2 == 1 and m <= (K2 + 1) // 4 - 1:
            return ComponentTag.I
        if m == (K2 + 1) // 4 + 1:
            return ComponentTag.II
    raise ClassificationError(f"{rec.recipe.name}: image {image} matches no component of ({rec.chi}, {K2})")


@dataclass
class ComponentOutcome:
    component: ComponentTag
    ok: bool
    recipe: str | None = None
    failures: list[str] = field(default_factory=list)


@dataclass
class PairEntry:
    line: LineTag
    chi: int
    K2: int
    count: int
    outcomes: list[ComponentOutcome] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(o.ok for o in self.outcomes)


@dataclass
class VerificationReport:
    chi_max: int
    entries: list[PairEntry] = field(default_factory=list)

    @property
    def failures(self) -> list[str]:
        return [f"{e.line.value} chi={e.chi} {o.component.value}: {msg}"
                for e in self.entries for o in e.outcomes for msg in o.failures]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def component_total(self) -> int:
        return sum(len(e.outcomes) for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "chi_max": self.chi_max,
            "passed": self.passed,
            "pairs": len(self.entries),
            "pair_components": self.component_total,
            "entries": [
                {
                    "line": e.line.value, "chi": e.chi, "K2": e.K2, "component_count": e.count,
                    "outcomes": [{"component": o.component.value, "ok": o.ok, "recipe": o.recipe,
                                  "failures": o.failures} for o in e.outcomes],
                }
                for e in self.entries
            ],
            "failures": self.failures,
        }


def verify_theorem(chi_max: int) -> VerificationReport:
    """Construct and cross-check a cover in every component up to ``chi_max``."""
    if chi_max < 7:
        raise PreconditionError("chi_max must be at least 7")
    report = VerificationReport(chi_max)
    for line in (LineTag.L6, LineTag.L5):
        for chi in range(_min_chi(line), chi_max + 1):
            entry = PairEntry(line, chi, line.K2(chi), component_count(line, chi))
            for comp in components_for(line, chi):
                out = ComponentOutcome(comp, ok=False)
                try:
                    rec = construct(line, chi, comp, oracle=True)
                    out.recipe = rec.recipe.name
                    out.failures = [name for name, ok in rec.oracle.items() if not ok]
                    if classify(rec) is not comp:
                        out.failures.append("classification")
                except (Z22Error, AssertionError) as exc:
                    out.failures.append(f"{type(exc).__name__}: {exc}")
                out.ok = not out.failures
                entry.outcomes.append(out)
            report.entries.append(entry)
    return report
