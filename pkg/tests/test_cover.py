import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from z22horikawa.cover import (
    Annotation,
    BuildingData,
    CoverInvariants,
    blow_up_cover_at_node,
    half_canonical_base_divisor,
    intermediate_double_cover,
    invariants,
    make_building_data,
    resolve_triple_point,
    solve_bundle_data,
    stacked_double_cover_oracle,
    validate_building_data,
)
from z22horikawa.linsys import positivity
from z22horikawa.errors import BuildingDataError, ParityObstruction, PreconditionError, RuleTableMiss
from z22horikawa.picard import PointSpec, exceptional_class, make_surface, plane_blowup_to_f1


def hirz(e):
    return make_surface("hirzebruch", e)


def f2_datum(chi=4):
    Y = hirz(2)
    return make_building_data(Y, Y.cls(1, 0), Y.cls(1, 2), Y.cls(3, chi + 4))


def quadric_datum(chi):
    Y = make_surface("quadric")
    return make_building_data(Y, Y.cls(1, 0), Y.cls(1, 0), Y.cls(3, chi + 1))


def fe_datum(e):
    Y = hirz(e)
    if e % 2:
        D1, D2 = Y.cls(0, 1), Y.cls(0, 1)
    else:
        D1, D2 = Y.zero(), Y.cls(0, 2)
    return make_building_data(Y, D1, D2, Y.cls(6, 5 * e))


def plane_datum(d3):
    P = make_surface("plane")
    return make_building_data(P, P.cls(1), P.cls(1), P.cls(d3))


def triple_datum(k):
    Y = hirz(k + 1)
    D1, D2 = (Y.cls(0, 1), Y.cls(0, 1)) if k % 2 == 0 else (Y.zero(), Y.cls(0, 2))
    D3 = Y.cls(6, 5 * (k + 1))
    p = PointSpec.on_divisor(D2, D3, label="p")
    notes = [(), (Annotation("tangency", at=p, order=3),), (Annotation("triple_point", at=p),)]
    return make_building_data(Y, D1, D2, D3, notes)


# --- bundle data ------------------------------------------------------------

def test_solve_bundle_data_f2():
    Y = hirz(2)
    L = solve_bundle_data(Y, Y.cls(1, 0), Y.cls(1, 2), Y.cls(3, 8))
    assert [x.coeffs for x in L] == [(2, 5), (2, 4), (1, 1)]


def test_solve_bundle_data_zero():
    Y = hirz(2)
    assert all(x.is_zero() for x in solve_bundle_data(Y, Y.zero(), Y.zero(), Y.zero()))


def test_parity_obstruction_names_sum():
    Y = hirz(2)
    with pytest.raises(ParityObstruction, match=r"parity obstruction: D2\+D3"):
        solve_bundle_data(Y, Y.zero(), Y.zero(), Y.cls(1, 0))
    with pytest.raises(ParityObstruction, match=r"D1\+D3"):
        solve_bundle_data(Y, Y.cls(1, 0), Y.zero(), Y.zero())


def test_classes_must_live_on_base():
    with pytest.raises(PreconditionError):
        solve_bundle_data(hirz(2), hirz(3).zero(), hirz(2).zero(), hirz(2).zero())


# --- validation -------------------------------------------------------------

def test_validate_examples():
    rep = validate_building_data(f2_datum())
    assert rep.valid and rep.pairwise[(1, 2)] == 0
    F1 = hirz(1)
    bd = make_building_data(F1, F1.cls(1, 0), F1.cls(1, 2), F1.cls(3, 6))
    assert validate_building_data(bd).pairwise[(1, 2)] == 1


def test_validate_rejects_bad_bundles():
    bd = f2_datum()
    bad = BuildingData(bd.base, bd.branch, (bd.L(1) + bd.base.cls(0, 1), bd.L(2), bd.L(3)))
    with pytest.raises(BuildingDataError, match="2L1"):
        validate_building_data(bad)
    bad3 = BuildingData(bd.base, bd.branch, (bd.L(1), bd.L(2), bd.L(3) + bd.base.cls(1, 0)))
    with pytest.raises(BuildingDataError, match="L3"):
        validate_building_data(bad3)


def test_validate_zero_annotation():
    Y = hirz(2)
    with pytest.raises(BuildingDataError, match="annotated zero"):
        validate_building_data(make_building_data(Y, Y.cls(0, 2), Y.cls(0, 2), Y.zero(),
                                                  [(Annotation("zero"),), (), ()]))


def test_validate_flags_negative_squares():
    rep = validate_building_data(f2_datum())
    assert rep.negative_components == (1,)
    Y = hirz(2)
    bd = make_building_data(Y, Y.cls(1, 0), Y.cls(1, 2), Y.cls(3, 8), [(Annotation("smooth"),), (), ()])
    assert any("negative square" in w for w in validate_building_data(bd).warnings)


def test_annotation_requires_point():
    with pytest.raises(ValueError):
        Annotation("triple_point")
    with pytest.raises(ValueError):
        Annotation("cusp")


# --- invariants -------------------------------------------------------------

def test_invariants_examples():
    assert invariants(f2_datum()) == CoverInvariants(K2=2, chi=4, pg=3)
    assert (invariants(plane_datum(5)).K2, invariants(plane_datum(5)).chi) == (1, 3)
    assert (invariants(plane_datum(7)).K2, invariants(plane_datum(7)).chi) == (9, 7)
    for e in range(1, 17, 2):
        inv = invariants(fe_datum(e))
        assert (inv.K2, inv.chi) == (8 * e - 8, 4 * e - 1)


def test_fe_family_even_e():
    for e in range(2, 17, 2):
        inv = invariants(fe_datum(e))
        assert (inv.K2, inv.chi) == (8 * e - 8, 4 * e - 1)


def test_degenerate_datum_is_refused():
    # zero branch gives four disjoint copies of the base, so chi = 4 but pg = 0
    Y = hirz(2)
    with pytest.raises(ValueError, match="1 - q \\+ pg"):
        invariants(make_building_data(Y, Y.zero(), Y.zero(), Y.zero()))


def test_cover_invariants_checks_pg():
    with pytest.raises(ValueError):
        CoverInvariants(K2=2, chi=4, pg=2)
    assert CoverInvariants(K2=2, chi=4, pg=None).pg is None


def test_half_canonical_examples():
    assert half_canonical_base_divisor(f2_datum()).coeffs == (1, 2)
    F3 = hirz(3)
    bd = make_building_data(F3, F3.cls(1, 0), F3.cls(1, 4), F3.cls(3, 12))
    assert half_canonical_base_divisor(bd).coeffs == (1, 6)
    assert half_canonical_base_divisor(make_building_data(F3, F3.zero(), F3.zero(), F3.zero())) == 2 * F3.canonical


def test_pg_equals_chi_minus_one_on_families():
    for chi in range(4, 60, 2):
        inv = invariants(f2_datum(chi))
        assert inv.pg == inv.chi - 1 and inv.K2 == 2 * inv.chi - 6
    for chi in range(5, 60, 2):
        inv = invariants(quadric_datum(chi))
        assert inv.pg == inv.chi - 1 and inv.K2 == 2 * inv.chi - 6


# --- intermediate cover -----------------------------------------------------

def test_intermediate_fe():
    for e in range(1, 17):
        ic = intermediate_double_cover(fe_datum(e), 3)
        assert ic.surface.kind == "hirzebruch" and ic.surface.e == 2 * e
        assert ic.branch.coeffs == (6, 10 * e)
        assert ic.M.coeffs == (1, 3 * e - 2)


def test_intermediate_quadric():
    for chi in range(5, 61, 2):
        ic = intermediate_double_cover(quadric_datum(chi), 3)
        assert ic.surface.kind == "quadric"
        assert ic.branch.coeffs == (6, chi + 1)
        assert ic.M.coeffs == (1, (chi - 3) // 2)


def test_intermediate_rule_miss():
    with pytest.raises(RuleTableMiss, match="configuration not in rule table"):
        intermediate_double_cover(f2_datum(), 3)
    Q = make_surface("quadric")
    with pytest.raises(RuleTableMiss):
        stacked_double_cover_oracle(make_building_data(Q, Q.zero(), Q.zero(), Q.zero()), 3)


def test_stacked_oracle_examples():
    s = stacked_double_cover_oracle(quadric_datum(5), 3)
    assert (s.K2, s.chi) == (4, 5) and s == invariants(quadric_datum(5))
    s = stacked_double_cover_oracle(fe_datum(3), 3)
    assert (s.K2, s.chi) == (16, 11)


def test_stacked_oracle_exhaustive():
    for chi in range(5, 121, 2):
        bd = quadric_datum(chi)
        assert stacked_double_cover_oracle(bd, 3) == invariants(bd)
    for e in range(1, 17):
        bd = fe_datum(e)
        assert stacked_double_cover_oracle(bd, 3) == invariants(bd)


@settings(max_examples=300, deadline=None)
@given(e=st.integers(0, 8), a=st.integers(0, 4), b=st.integers(0, 40), odd=st.booleans())
def test_stacked_oracle_property(e, a, b, odd):
    # any D3 compatible with a fiber pair; the two routes must agree on chi and K2
    Y = hirz(e)
    D1, D2 = (Y.cls(0, 1), Y.cls(0, 1)) if odd else (Y.zero(), Y.cls(0, 2))
    D3 = Y.cls(2 * a + 2, 2 * b + e * (2 * a + 2) + (1 if odd else 0))
    bd = make_building_data(Y, D1, D2, D3)
    if not all(L.self_intersection() > 0 for L in bd.bundles[:2]):
        return
    inv, st_inv = invariants(bd), stacked_double_cover_oracle(bd, 3)
    assert (inv.chi, inv.K2) == (st_inv.chi, st_inv.K2)


# --- transports -------------------------------------------------------------

def test_node_f1_example():
    F1 = hirz(1)
    bd = make_building_data(F1, F1.cls(1, 0), F1.cls(1, 2), F1.cls(3, 6))
    out = blow_up_cover_at_node(bd, 1, 2)
    inv = invariants(out)
    assert (inv.chi, inv.K2) == (4, 2)
    assert out.D(3).coeffs[-1] == 1 and out.D(1).coeffs[-1] == -1 and out.D(2).coeffs[-1] == -1
    assert "contains_exceptional" in {a.kind for a in out.notes(3)}


def test_node_plane_example():
    out = blow_up_cover_at_node(plane_datum(7), 1, 2)
    inv = invariants(out)
    assert (inv.chi, inv.K2) == (7, 8)
    # lines through the point become fibers of F1
    assert [plane_blowup_to_f1(d).coeffs for d in out.branch] == [(0, 1), (0, 1), (8, 7)]


def test_node_preconditions():
    with pytest.raises(PreconditionError):
        blow_up_cover_at_node(f2_datum(), 1, 2)  # D1.D2 = 0
    with pytest.raises(PreconditionError):
        blow_up_cover_at_node(plane_datum(7), 1, 1)


def test_node_twice_at_infinitely_near_point():
    bd = triple_datum(1)
    res = resolve_triple_point(bd, 3, 2, 1)
    once = invariants(res)
    p = bd.notes(3)[0].at
    twice = invariants(blow_up_cover_at_node(res, 1, 2, at=PointSpec.infinitely_near(p)))
    assert (twice.chi, twice.K2) == (once.chi, once.K2 - 1)


def test_triple_point_examples():
    for k, sing, res in [(1, (7, 8), (6, 7)), (2, (11, 16), (10, 15)), (5, (23, 40), (22, 39))]:
        bd = triple_datum(k)
        a, b = invariants(bd), invariants(resolve_triple_point(bd, 3, 2, 1))
        assert (a.chi, a.K2) == sing and (b.chi, b.K2) == res
    assert (39 + 1) % 8 == 0


def test_triple_point_deltas_range():
    for k in range(1, 31):
        bd = triple_datum(k)
        out = resolve_triple_point(bd, 3, 2, 1)
        a, b = invariants(bd), invariants(out)
        assert (b.chi - a.chi, b.K2 - a.K2) == (-1, -1)
        assert (a.chi, a.K2) == (4 * k + 3, 8 * k)
        assert out.D(3).coeffs[-1] == -3 and out.D(2).coeffs[-1] == -1 and out.D(1).coeffs[-1] == 1
        validate_building_data(out)


def test_triple_point_annotation_errors():
    bd = triple_datum(1)
    with pytest.raises(BuildingDataError, match="triple_point"):
        resolve_triple_point(bd, 2, 3, 1)
    with pytest.raises(PreconditionError):
        resolve_triple_point(bd, 3, 3, 1)
    with pytest.raises(BuildingDataError):
        resolve_triple_point(f2_datum(), 3, 2, 1)


def _datum(e, d3, x, y):
    Y = hirz(e)
    D3 = Y.cls(*d3)
    return make_building_data(Y, D3 + 2 * Y.cls(*x), D3 + 2 * Y.cls(*y), D3)


def _regular(bd):
    # every L_i nef and big, so h^1(-L_i) = 0 and the cover is connected with q = 0
    return all(positivity(bd.base, L).verdict.is_nef and L.self_intersection() > 0 for L in bd.bundles)


pair = st.tuples(st.integers(0, 3), st.integers(0, 6))


@settings(max_examples=300, deadline=None)
@given(e=st.integers(0, 5), d3=pair, x=pair, y=pair, ij=st.sampled_from([(1, 2), (1, 3), (2, 3)]))
def test_node_transport_property(e, d3, x, y, ij):
    bd = _datum(e, d3, x, y)
    i, j = ij
    if not _regular(bd) or bd.D(i).dot(bd.D(j)) < 1:
        return
    out = blow_up_cover_at_node(bd, i, j)
    if not _regular(out):
        return
    a, b = invariants(bd), invariants(out)
    assert (b.chi - a.chi, b.K2 - a.K2) == (0, -1)
    assert 2 * out.L(1) == out.D(2) + out.D(3)
    assert 2 * out.L(2) == out.D(1) + out.D(3)
    assert 2 * out.L(3) == out.D(1) + out.D(2)


@settings(max_examples=300, deadline=None)
@given(e=st.integers(0, 5), d3=pair, x=pair, y=pair, perm=st.permutations([1, 2, 3]))
def test_triple_point_transport_property(e, d3, x, y, perm):
    t, s, u = perm
    bd = _datum(e, d3, x, y)
    Dt, K = bd.D(t), bd.base.canonical
    # a curve with an ordinary triple point has arithmetic genus at least 3
    if not _regular(bd) or (Dt.self_intersection() + Dt.dot(K)) // 2 + 1 < 3 or Dt.dot(bd.D(s)) < 3:
        return
    p = PointSpec.general(label="p")
    notes = [(), (), ()]
    notes[t - 1] = (Annotation("triple_point", at=p),)
    notes[s - 1] = (Annotation("tangency", at=p, order=3),)
    bd = BuildingData(bd.base, bd.branch, bd.bundles, tuple(notes))
    out = resolve_triple_point(bd, t, s, u)
    if not _regular(out):
        return
    a, b = invariants(bd), invariants(out)
    assert (b.chi - a.chi, b.K2 - a.K2) == (-1, -1)
    assert 2 * out.L(3) == out.D(1) + out.D(2)


@settings(max_examples=300, deadline=None)
@given(e=st.integers(0, 6), d3=pair, x=pair, y=pair)
def test_chi_is_one_plus_pg(e, d3, x, y):
    bd = _datum(e, d3, x, y)
    if not _regular(bd):
        return
    inv = invariants(bd)
    if inv.pg is not None:
        assert inv.chi == 1 + inv.pg
