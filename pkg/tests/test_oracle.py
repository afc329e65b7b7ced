from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fatrev.core import FatgraphError, canonical_form, euler_genus, is_orientable, validate
from fatrev.oracle import (
    StateBoundExceeded,
    bfs_distance,
    check_properties,
    enumerate_fatgraphs,
    from_chords,
    orientability_oracle,
    random_clustered_fatgraph,
    random_fatgraph,
    random_walk_fatgraph,
)
from fatrev.planner import r_distance
from fatrev.reversals import GLUING, SLICING, Reversal, apply

from conftest import enumerated, enumerated_upto, super_star

GOLDEN = Path(__file__).parent / "golden"


def _rows(name):
    lines = (GOLDEN / name).read_text().splitlines()
    return [tuple(map(int, ln.split())) for ln in lines if ln and not ln.startswith("#")]


@pytest.mark.parametrize("name, d", [("T1", 0), ("P1", 1), ("X2", 1), ("Y2", 0), ("O2", 3)])
def test_bfs_fixtures(fixtures, name, d):
    report = bfs_distance(fixtures[name])
    assert report.distance == d == len(report.moves)
    G = fixtures[name]
    for m in report.moves:
        G = apply(G, m)
    assert euler_genus(G) == 0


def test_pruned_and_plain_search_agree():
    for F in enumerated_upto(2) + list(enumerated(3))[::7]:
        assert bfs_distance(F).distance == bfs_distance(F, pruned=False).distance


def test_state_bound(fixtures):
    with pytest.raises(StateBoundExceeded):
        bfs_distance(fixtures["O2"], state_bound=2, pruned=False)


def test_orientability_oracle_fixtures(fixtures):
    for F in fixtures.values():
        assert orientability_oracle(F) == is_orientable(F)


def test_class_counts_match_golden():
    for n, count in _rows("class_counts.txt"):
        assert len(enumerated(n)) == count


def test_enumeration_methods_agree_at_n2():
    brute = {canonical_form(F) for F in enumerate_fatgraphs(2, "brute")}
    closure = {canonical_form(F) for F in enumerate_fatgraphs(2, "closure")}
    assert brute == closure


def test_enumeration_guard():
    with pytest.raises(FatgraphError):
        enumerate_fatgraphs(5)


def test_formula_matches_frozen_search_histogram():
    frozen = {(n, g, d): k for n, g, d, k in _rows("distance_histogram.txt")}
    live = Counter()
    for n in (1, 2, 3, 4):
        for F in enumerated(n):
            live[(n, euler_genus(F), r_distance(F))] += 1
    assert dict(live) == frozen


def test_random_fatgraph_small(fixtures):
    for s in range(5):
        assert canonical_form(random_fatgraph(1, 1, s)) == canonical_form(fixtures["P1"])
    with pytest.raises(FatgraphError):
        random_fatgraph(2, 3, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.data())
def test_generators_produce_valid_fatgraphs(n, data):
    g = data.draw(st.integers(0, n))
    seed = data.draw(st.integers(0, 2**20))
    F = random_fatgraph(n, g, seed)
    assert validate(F.n, F.sigma, F.omega).ok and F.n == n and euler_genus(F) == g
    for G in (random_clustered_fatgraph(n, seed), random_walk_fatgraph(n, 5, seed)):
        assert validate(G.n, G.sigma, G.omega).ok and G.n == n


def test_from_chords_plane_tree():
    F = from_chords(["a", "a", "b", "b"])
    assert F.n == 2 and euler_genus(F) == 0
    assert super_star(3).n == 18


@pytest.mark.parametrize("name, move", [("X2", Reversal(2, 4, SLICING)), ("T2", Reversal(1, 3, GLUING))])
def test_property_battery_examples(fixtures, name, move):
    rep = check_properties(fixtures[name], move)
    assert rep.ok, str(rep)
    assert {"ribbon-tracking", "direction-change", "crossing-change", "genus-plus-exposed"} <= set(rep.results)
    if name == "T2":
        assert rep.results["on-path-merge"]
