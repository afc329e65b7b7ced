import pytest
from hypothesis import given, settings, strategies as st

from fatrev.core import (
    BI,
    MONO,
    TWISTED,
    UNTWISTED,
    Fatgraph,
    FatgraphError,
    canonical_form,
    canonical_representative,
    crossing,
    euler_genus,
    flip_vertex,
    format_cycles,
    induced_fatgraph,
    is_orientable,
    make_fatgraph,
    negate,
    parse_cycles,
    parse_signs,
    ribbons,
    validate,
)
from fatrev.decomposition import components
from fatrev.oracle import random_clustered_fatgraph, random_fatgraph
from fatrev.reversals import slice

from conftest import enumerated_upto


@st.composite
def fatgraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**20))
    if draw(st.booleans()):
        return random_fatgraph(n, draw(st.integers(0, n)), seed)
    return random_clustered_fatgraph(n, seed)


# --- validate -----------------------------------------------------------------

def test_f2b_validates_with_captioned_ribbons(f2b):
    rs = {frozenset(r.sectors): r for r in ribbons(f2b)}
    a = rs[frozenset({1, 5, 6, 2})]
    b = rs[frozenset({5, 3, 4, 6})]
    assert (a.twist, a.direction) == (UNTWISTED, BI)
    assert (b.twist, b.direction) == (UNTWISTED, MONO)
    c = rs[frozenset({3, 7, 2, 4})]
    assert c.twist == TWISTED
    assert euler_genus(f2b) == 1


def test_t1_single_untwisted_bi_ribbon(fixtures):
    (r,) = ribbons(fixtures["T1"])
    assert (r.wedge_a, r.wedge_b) == ((1, 3), (2, 2))
    assert (r.twist, r.direction) == (UNTWISTED, BI)


def test_all_plus_loop_is_rejected():
    report = validate(1, parse_cycles("(1 2 3)", 3), (0, 1, 1, 1))
    assert not report.ok
    assert "wedge (1,2) has no admissible partner" in str(report)


@pytest.mark.parametrize("sigma, omega, fragment", [
    ("(1 3)(2)", "+ + -", "omega(1) != omega(3)"),
    ("(1)(2 3)", "+ + +", "sigma(3) = 2"),
])
def test_root_violations(sigma, omega, fragment):
    report = validate(1, parse_cycles(sigma, 3), (0,) + parse_signs(omega))
    assert not report.ok and fragment in str(report)


def test_non_bijection_rejected():
    assert not validate(1, (0, 3, 3, 1), (0, 1, 1, 1)).ok


def test_make_fatgraph_raises_on_invalid():
    with pytest.raises(FatgraphError):
        make_fatgraph(1, "(1 2 3)", "+ + +")


def test_n_zero_rejected():
    assert not validate(0, (0, 1), (0, 1)).ok


# --- ribbons, genus, orientability -------------------------------------------

def test_p1_ribbon(fixtures):
    (r,) = ribbons(fixtures["P1"])
    assert (r.wedge_a, r.wedge_b) == ((1, 2), (2, 3))
    assert (r.twist, r.direction, r.origin, r.terminus) == (TWISTED, MONO, 1, 3)


def test_o2_ribbons(fixtures):
    rs = ribbons(fixtures["O2"])
    assert [(r.origin, r.terminus) for r in rs] == [(1, 4), (2, 5)]
    assert {(r.wedge_a, r.wedge_b) for r in rs} == {((1, 4), (3, 2)), ((2, 5), (4, 3))}
    assert all(r.twist == UNTWISTED and r.direction == BI for r in rs)


@pytest.mark.parametrize("name, genus, orientable", [
    ("T1", 0, True), ("P1", 1, False), ("T2", 0, True), ("X2", 1, False), ("Y2", 0, True), ("O2", 2, True),
])
def test_fixture_genus_and_orientability(fixtures, name, genus, orientable):
    F = fixtures[name]
    assert euler_genus(F) == genus
    assert is_orientable(F) is orientable


@settings(max_examples=60, deadline=None)
@given(fatgraphs())
def test_both_wedges_agree_and_origin_precedes_terminus(F):
    for r in ribbons(F):
        w = F.omega
        (x, sx), (y, sy) = r.wedge_a, r.wedge_b
        assert (w[x] == -w[sx]) == (w[y] == -w[sy]) == r.mono
        assert r.origin < r.terminus


@settings(max_examples=60, deadline=None)
@given(fatgraphs())
def test_matching_is_perfect(F):
    report = validate(F.n, F.sigma, F.omega)
    assert report.ok
    assert sorted(report.partner) == list(range(1, 2 * F.n + 1))
    assert all(report.partner[report.partner[x]] == x for x in report.partner)


# --- flips and canonical form --------------------------------------------------

def test_flip_leaf_gives_t1(fixtures):
    F = Fatgraph(1, parse_cycles("(1 3)(2)", 3), (0, 1, -1, 1))
    assert flip_vertex(F, 2) == fixtures["T1"]


def test_flip_f2b_vertex_reverses_cycle(f2b):
    G = flip_vertex(f2b, 2)
    assert (2, 6, 4) in G.vertices()
    assert all(G.omega[x] == -f2b.omega[x] for x in (2, 4, 6))


def test_flip_unknown_vertex():
    F = make_fatgraph(1, "(1 3)(2)", "+ + +")
    with pytest.raises(FatgraphError):
        flip_vertex(F, 7)


@settings(max_examples=60, deadline=None)
@given(fatgraphs(), st.data())
def test_flip_invariants(F, data):
    vs = [v for v in F.vertices() if 1 not in v]
    if not vs:
        return
    v = data.draw(st.sampled_from(vs))
    G = flip_vertex(F, v[0])
    assert validate(G.n, G.sigma, G.omega).ok
    assert flip_vertex(G, v[0]) == F
    assert euler_genus(G) == euler_genus(F)
    assert is_orientable(G) == is_orientable(F)
    before, after = ribbons(F), ribbons(G)
    assert sorted((r.sectors, r.origin, r.terminus, r.mono) for r in before) == \
        sorted((r.sectors, r.origin, r.terminus, r.mono) for r in after)
    assert canonical_form(G) == canonical_form(F)
    for r in before:
        twin = next(t for t in after if t.sectors == r.sectors)
        if twin.twist != r.twist:
            touched = {s for s in r.sectors if s in v}
            assert touched and touched != r.sectors, (r, v)


@settings(max_examples=60, deadline=None)
@given(fatgraphs())
def test_canonical_form_idempotent_and_sign_blind(F):
    R = canonical_representative(F)
    assert canonical_form(R) == canonical_form(F)
    assert canonical_form(negate(F)) == canonical_form(F)


def test_slice_p1_is_t1_up_to_flips(fixtures):
    G = slice(fixtures["P1"], 1, 2)
    assert canonical_form(G) == canonical_form(fixtures["T1"])


# --- crossing and induced fatgraphs ---------------------------------------------

def test_crossing_examples(fixtures):
    a, b = ribbons(fixtures["O2"])
    assert crossing(fixtures["O2"], a, b)
    c, d = ribbons(fixtures["T2"])
    assert not crossing(fixtures["T2"], c, d)
    with pytest.raises(FatgraphError):
        crossing(fixtures["T2"], c, c)


def test_induced_inner_component_of_t2(fixtures):
    T2 = fixtures["T2"]
    inner = next(c for c in components(T2) if c.start == 2)
    H = induced_fatgraph(T2, inner.ribbons)
    assert H.n == 1 and euler_genus(H) == 0 and validate(H.n, H.sigma, H.omega).ok


def test_induced_irreducible_is_itself(fixtures):
    X2 = fixtures["X2"]
    (c,) = components(X2)
    assert canonical_form(induced_fatgraph(X2, c.ribbons)) == canonical_form(X2)


def test_induced_rejects_non_component(fixtures):
    O2 = fixtures["O2"]
    with pytest.raises(FatgraphError):
        induced_fatgraph(O2, ribbons(O2)[:1])


@settings(max_examples=60, deadline=None)
@given(fatgraphs(max_n=8))
def test_genus_is_sum_over_components(F):
    total = 0
    for c in components(F):
        H = induced_fatgraph(F, c.ribbons)
        assert validate(H.n, H.sigma, H.omega).ok
        assert len(components(H)) == 1
        total += euler_genus(H)
    assert total == euler_genus(F)


def test_cycle_text_round_trip():
    perm = parse_cycles("(1 5 3 7)(2 4 6)", 7)
    assert format_cycles(perm) == "(1 5 3 7)(2 4 6)"
    with pytest.raises(FatgraphError):
        parse_cycles("(1 2", 3)
    with pytest.raises(FatgraphError):
        parse_cycles("(1 2)(2 3)", 3)


def test_enumerated_all_valid():
    for F in enumerated_upto(3):
        assert validate(F.n, F.sigma, F.omega).ok and euler_genus(F) >= 0
