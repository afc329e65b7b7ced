"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary and on
stdout with ``-s``) before asserting.
"""
import random
import time
from functools import lru_cache

from fatrev import FIXTURES, fixture
from fatrev.core import (
    BI,
    MONO,
    UNTWISTED,
    euler_genus,
    induced_fatgraph,
    is_orientable,
    ribbons,
)
from fatrev.decomposition import components, decompose
from fatrev.formats import emit_fatg, emit_script, parse_fatg, parse_script
from fatrev.oracle import (
    bfs_distance,
    check_properties,
    has_ambiguous_twist,
    orientability_oracle,
)
from fatrev.planner import (
    M_RIBBON_SLICE,
    MERGE_SLICE,
    execute,
    formula_distance,
    best_m_ribbon,
    pacman_step,
    plan,
    r_distance,
)
from fatrev.reversals import SLICING, Reversal, apply, legal_reversals, m_ribbon_slice_pair

from conftest import enumerated_upto, record_criterion, sampled, super_star

SAMPLES_PER_N = 250
SEED = 20240917


@lru_cache(maxsize=None)
def _bfs(F):
    return bfs_distance(F).distance


def _agreement_instances():
    return enumerated_upto(3) + list(sampled(4, SAMPLES_PER_N, SEED)) + list(sampled(5, SAMPLES_PER_N, SEED + 1))


def _wide_instances():
    out = enumerated_upto(4)
    for n in range(5, 11):
        out += sampled(n, 60, SEED + n)
    return out + [super_star(b, d) for b, d in ((2, 1), (3, 1), (3, 2), (4, 2))]


def _move_sample(count=1200, seed=SEED):
    """Seeded (fatgraph, reversal) pairs with at most five ribbons."""
    rng = random.Random(seed)
    pool = enumerated_upto(3) + [F for n in (4, 5) for F in sampled(n, 150, seed + n)]
    return [(F, rng.choice(legal_reversals(F))) for F in (rng.choice(pool) for _ in range(count))]


def test_criterion_01_formula_search_planner_agree():
    t0 = time.perf_counter()
    instances = _agreement_instances()
    bad = [F for F in instances if not r_distance(F) == _bfs(F) == len(plan(F))]
    elapsed = time.perf_counter() - t0
    n3 = len(enumerated_upto(3))
    ok = not bad and elapsed < 300 and len(instances) - n3 >= 500
    record_criterion(1, "formula = search = plan length", ok,
                     f"{n3} exhaustive + {len(instances) - n3} sampled, {len(bad)} mismatches, {elapsed:.0f}s")
    assert ok, bad[:3]


def test_criterion_02_irreducible_non_orientable():
    instances = [F for F in _wide_instances()
                 if len(components(F)) == 1 and not is_orientable(F)]
    bad = []
    for F in instances:
        p = plan(F)
        G = F
        good = len(p) == euler_genus(F)
        for step in p:
            c = next(c for c in decompose(G).components if not c.orientable)
            expect = Reversal(*m_ribbon_slice_pair(G, best_m_ribbon(G, c)), SLICING)
            good = good and step.rule == M_RIBBON_SLICE and step.move == expect and not step.fallback
            G = apply(G, step.move)
            good = good and euler_genus(G) == step.genus
        good = good and euler_genus(G) == 0
        if not good:
            bad.append(F)
    ok = not bad and len(instances) > 0
    record_criterion(2, "irreducible non-orientable: g slicings by the ranked m-ribbon", ok,
                     f"{len(instances)} instances, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_03_block_non_orientable():
    instances = [F for F in _wide_instances() if decompose(F).block_non_orientable]
    bad = []
    for F in instances:
        g = euler_genus(F)
        p = plan(F)
        good = len(p) == g
        G = F
        for k, step in enumerate(p, 1):
            good = good and step.rule in (M_RIBBON_SLICE, MERGE_SLICE) and step.move == pacman_step(G)
            G = apply(G, step.move)
            D = decompose(G)
            good = good and D.block_non_orientable and D.genus == g - k
        if not good:
            bad.append(F)
    ok = not bad and len(instances) > 0
    record_criterion(3, "block-non-orientable: g slicings, each keeps the property", ok,
                     f"{len(instances)} instances, {len(bad)} failures")
    assert ok, bad[:3]


_RIBBON_CONTRACTS = ("direction-change", "crossing-change", "m-ribbon-slice-crossing", "m-ribbon-slice-trivial",
                     "ribbon-tracking")
_DECOMPOSITION_CONTRACTS = ("off-path-components", "on-path-merge", "off-path-blocks", "covered-blocks-merge")


@lru_cache(maxsize=None)
def _reports():
    return [check_properties(F, m) for F, m in _move_sample()]


def _tally(names):
    reports = _reports()
    checked = {k: 0 for k in names}
    failed = []
    for rep in reports:
        for k in names:
            if k in rep.results:
                checked[k] += 1
                if not rep.results[k]:
                    failed.append((k, str(rep)))
    return len(reports), checked, failed


def test_criterion_04_direction_and_crossing_changes():
    total, checked, failed = _tally(_RIBBON_CONTRACTS)
    ok = total >= 1000 and not failed and checked["direction-change"] == total
    record_criterion(4, "direction and crossing changes follow the intersects rule", ok,
                     f"{total} pairs, {sum(checked.values())} contract checks, {len(failed)} violations")
    assert ok, failed[:3]


def test_criterion_05_decomposition_contracts():
    total, checked, failed = _tally(_DECOMPOSITION_CONTRACTS)
    ok = total >= 1000 and not failed and all(checked.values())
    record_criterion(5, "off-path pieces persist, on-path pieces merge", ok,
                     f"{total} pairs, checks {checked}, {len(failed)} violations")
    assert ok, failed[:3]


def test_criterion_06_genus_plus_exposed_drops_at_most_one():
    rng = random.Random(SEED)
    pool = [F for F in _wide_instances() if F.n <= 7]
    states = rng.sample(pool, 150)
    worst = -10**9
    moves = 0
    for F in states:
        D = decompose(F)
        before = D.genus + D.h
        for m in legal_reversals(F):
            DG = decompose(apply(F, m))
            worst = max(worst, before - (DG.genus + DG.h))
            moves += 1
    ok = len(states) >= 100 and worst <= 1
    record_criterion(6, "g + h drops by at most one per reversal", ok,
                     f"{len(states)} states, {moves} reversals, largest drop {worst}")
    assert ok


def test_criterion_07_orientability_oracle():
    instances = enumerated_upto(3)
    bad = [F for F in instances if orientability_oracle(F) != is_orientable(F)]
    quarantine = [F for F in instances if has_ambiguous_twist(F)]
    ok = not bad and not quarantine
    record_criterion(7, "orientability agrees with the vertex-flip oracle", ok,
                     f"{len(instances)} instances, {len(bad)} disagreements, {len(quarantine)} ambiguous twists")
    assert ok, bad[:3] + quarantine[:3]


def test_criterion_08_genus_is_additive():
    instances = _wide_instances()
    bad = [F for F in instances
           if euler_genus(F) != sum(euler_genus(induced_fatgraph(F, c.ribbons)) for c in components(F))
           or euler_genus(F) != sum(c.genus for c in components(F))]
    ok = not bad
    record_criterion(8, "genus is the sum of component genera", ok,
                     f"{len(instances)} instances, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_09_pinned_values():
    F = fixture("F2B")
    rs = {frozenset((r.wedge_a, r.wedge_b)): r for r in ribbons(F)}
    a = rs.get(frozenset({(1, 5), (6, 2)}))
    b = rs.get(frozenset({(5, 3), (4, 6)}))
    ok = (a is not None and a.twist == UNTWISTED and a.direction == BI
          and b is not None and b.twist == UNTWISTED and b.direction == MONO
          and formula_distance(12, 3, False) == 15)
    record_criterion(9, "worked-example ribbons and the g=12, h=3 distance", ok)
    assert ok


def test_criterion_10_lower_bounds():
    instances = _agreement_instances()
    bad = []
    for F in instances:
        D = decompose(F)
        d = _bfs(F)
        if d < D.genus or d < D.genus + D.h:
            bad.append(F)
    ok = not bad
    record_criterion(10, "search distance is at least g and at least g + h", ok,
                     f"{len(instances)} instances, {len(bad)} violations")
    assert ok, bad[:3]


def test_criterion_11_round_trip_and_replay():
    bad = []
    for name in FIXTURES:
        F = fixture(name)
        if parse_fatg(emit_fatg(F)) != F:
            bad.append(f"{name}: round trip")
        if not F.unicellular:
            continue
        p = plan(F)
        moves = parse_script(emit_script(p))
        run = execute(parse_fatg(emit_fatg(F)), moves)
        if len(moves) != r_distance(F) or euler_genus(run.final) != 0:
            bad.append(f"{name}: replay")
    ok = not bad
    record_criterion(11, "fixtures round-trip and their plans replay to genus 0", ok,
                     f"{len(FIXTURES)} fixtures, failures {bad}")
    assert ok
