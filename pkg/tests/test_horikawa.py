import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from z22horikawa.errors import ClassificationError, ConstructionError, PreconditionError
from z22horikawa.horikawa import KSBA_NOTE, admissible, classify, component_count, components_for, construct, verify_theorem
from z22horikawa.linsys import MapImageKind
from z22horikawa.records import ComponentTag, LineTag
from dataclasses import replace

L6, L5 = LineTag.L6, LineTag.L5
I, II, ONLY = ComponentTag.I, ComponentTag.II, ComponentTag.ONLY


def test_admissible():
    assert admissible(4, 2)
    assert not admissible(3, 0)
    assert not admissible(1, 10)
    assert admissible(1, 9)


def test_component_count_examples():
    assert component_count(L6, 7) == 2
    assert component_count(L6, 6) == 1
    assert component_count(L5, 7) == 2
    assert component_count(L5, 5) == 1
    assert component_count(L5, 6) == 2
    with pytest.raises(PreconditionError):
        component_count(L6, 3)
    with pytest.raises(PreconditionError):
        component_count(L5, 2)


def test_component_count_rule():
    for chi in range(4, 200):
        assert component_count(L6, chi) == (2 if (2 * chi - 6) % 8 == 0 else 1)
    for chi in range(3, 200):
        K2 = 2 * chi - 5
        assert component_count(L5, chi) == (2 if (K2 + 1) % 8 == 0 or (chi, K2) == (7, 9) else 1)


def test_construct_examples():
    rec = construct(L6, 4)
    assert rec.recipe.name == "L6_F2" and (rec.chi, rec.K2) == (4, 2)
    assert rec.canonical.positivity.verdict.value == "NefNotAmple"
    rec = construct(L6, 11, II)
    assert rec.recipe.name == "L6_Fe" and rec.recipe.params == {"e": 3} and rec.K2 == 16
    assert rec.canonical.image == MapImageKind("HirzebruchImage", 6)
    rec = construct(L5, 6, II)
    assert rec.recipe.params == {"k": 1} and rec.canonical.image == MapImageKind("ConeImage", 3)
    rec = construct(L5, 10, II)
    assert rec.recipe.params == {"k": 2} and (rec.chi, rec.K2) == (10, 15)
    sing = rec.singular[1]
    assert (sing.chi, sing.K2) == (11, 16)
    assert rec.notes == (KSBA_NOTE,)


def test_recipe_dispatch():
    names = {
        (L6, 6, ONLY): "L6_F2", (L6, 5, ONLY): "L6_Quadric", (L6, 7, I): "L6_Quadric", (L6, 7, II): "L6_Fe",
        (L5, 3, ONLY): "L5_P2_31", (L5, 5, ONLY): "L5_F3", (L5, 4, ONLY): "L5_F1", (L5, 6, I): "L5_F1",
        (L5, 6, II): "L5_Fk", (L5, 7, I): "L5_79_F3", (L5, 7, II): "L5_79_P2",
    }
    for (line, chi, c), name in names.items():
        assert construct(line, chi, c).recipe.name == name


def test_spot_values():
    for d3, want in ((5, (3, 1)), (7, (7, 9))):
        rec = construct(L5, want[0], ONLY if d3 == 5 else II)
        assert (rec.invariants.chi, rec.invariants.K2) == want
    for e in range(2, 17):
        rec = construct(L6, 4 * e - 1, II)
        assert rec.recipe.params == {"e": e}
        assert (rec.invariants.chi, rec.invariants.K2) == (4 * e - 1, 8 * e - 8)
    for k in range(1, 16):
        rec = construct(L5, 4 * k + 2, II)
        assert (rec.singular[1].chi, rec.singular[1].K2) == (4 * k + 3, 8 * k)
        assert (rec.invariants.chi, rec.invariants.K2) == (4 * k + 2, 8 * k - 1)


def test_construct_errors():
    with pytest.raises(ConstructionError, match="single component"):
        construct(L6, 6, II)
    with pytest.raises(ConstructionError, match="two components"):
        construct(L6, 7, ONLY)
    with pytest.raises(ConstructionError):
        construct(L6, 3)
    with pytest.raises(ConstructionError):
        construct(L5, 2)


def test_classify_examples():
    assert classify(construct(L6, 7, I)) is I
    assert classify(construct(L6, 7, II)) is II
    assert classify(construct(L5, 7, I)) is I
    assert classify(construct(L5, 7, II)) is II


def test_classify_rejects_unsupported_image():
    rec = construct(L6, 7, I)
    can = replace(rec.canonical, image=MapImageKind("Unsupported"))
    with pytest.raises(ClassificationError):
        classify(replace(rec, canonical=can))


def test_classify_rejects_unknown_image():
    rec = construct(L6, 15, II)
    can = replace(rec.canonical, image=MapImageKind("HirzebruchImage", 3))
    with pytest.raises(ClassificationError):
        classify(replace(rec, canonical=can))


@pytest.mark.parametrize("line", [L6, L5])
def test_classify_construct_roundtrip(line):
    lo = 4 if line is L6 else 3
    for chi in range(lo, 121):
        comps = components_for(line, chi)
        assert len(comps) == component_count(line, chi)
        for c in comps:
            rec = construct(line, chi, c)
            assert classify(rec) is c
            assert rec.K2 == line.K2(rec.chi) == rec.invariants.K2
            assert rec.invariants.chi == rec.chi and rec.z22_action
            assert all(rec.oracle.values()), (chi, c, rec.oracle)


@settings(max_examples=200, deadline=None)
@given(chi=st.integers(4, 400), comp=st.sampled_from([ONLY, I, II]), line=st.sampled_from([L6, L5]))
def test_class_two_only_where_allowed(chi, comp, line):
    allowed = components_for(line, chi)
    if comp in allowed:
        assert construct(line, chi, comp, oracle=False).component is comp
    else:
        with pytest.raises(ConstructionError):
            construct(line, chi, comp, oracle=False)


def test_verify_small():
    rep = verify_theorem(7)
    assert rep.passed
    assert [(e.line, e.chi) for e in rep.entries] == [(L6, c) for c in range(4, 8)] + [(L5, c) for c in range(3, 8)]
    assert [e.count for e in rep.entries] == [1, 1, 1, 2, 1, 1, 1, 2, 2]
    assert len(rep.entries) == 9 and rep.component_total == 12
    with pytest.raises(PreconditionError):
        verify_theorem(4)


def test_verify_full_range():
    rep = verify_theorem(120)
    assert rep.passed and rep.failures == []
    assert rep.to_dict()["pairs"] == 117 + 118
