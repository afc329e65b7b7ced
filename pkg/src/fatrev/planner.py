"""Reversal distance formula and optimal reversal scripts.

A plan first removes orientable blocks (half-flips and gluings), then slices
the block-non-orientable fatgraph down to a plane tree one genus at a time.
Every step carries a certificate: the genus and exposed-block count the next
state must have.  A step whose certificate fails is replaced by the next
candidate of the same rule; if none works an :class:`InconsistencyError` is
raised rather than returning a longer plan.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .core import (
    Fatgraph,
    FatgraphError,
    InconsistencyError,
    Ribbon,
    _require_unicellular,
    euler_genus,
    ribbons_cross,
)
from .decomposition import (
    Component,
    M_ADJACENT,
    adjacency,
    common_vertex,
    components,
    covered_blocks,
    decompose,
    is_white,
    shared_white,
)
from .reversals import (
    GLUING,
    HALF_FLIPPING,
    SLICING,
    Reversal,
    _kind,
    apply,
    m_ribbon_slice_pair,
)

# rule tags
M_RIBBON_SLICE = "m-ribbon-slice"
MERGE_SLICE = "merge-slice"
BLOCK_HALF_FLIP = "block-half-flip"
PAIR_GLUE = "pair-glue"
ODD_GLUE = "odd-glue"
RULES = (M_RIBBON_SLICE, MERGE_SLICE, BLOCK_HALF_FLIP, PAIR_GLUE, ODD_GLUE)


def formula_distance(g: int, h: int, all_super: bool = False) -> int:
    if g < 0 or h < 0:
        raise FatgraphError("genus and exposed-block count must be non-negative")
    if h != 1 and h % 2 == 1 and all_super:
        return g + h + 1
    return g + h


def r_distance(F: Fatgraph) -> int:
    D = decompose(F)
    return formula_distance(D.genus, D.h, D.all_super)


# ---------------------------------------------------------------------------
# Steps and plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    move: Reversal
    rule: str
    genus: int      # expected genus after the step
    exposed: int    # expected number of exposed blocks after the step
    fallback: bool = False  # the rule's preferred candidate failed its certificate

    def __str__(self):
        return str(self.move)


@dataclass
class Plan:
    start: Fatgraph
    steps: list = field(default_factory=list)
    distance: int = 0
    pairing_fallback: bool = False

    @property
    def moves(self) -> list:
        return [s.move for s in self.steps]

    @property
    def flagged(self) -> bool:
        return self.pairing_fallback or any(s.fallback for s in self.steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class StateRecord:
    move: Reversal | None
    fatgraph: Fatgraph
    genus: int
    orientable: bool
    exposed: int


@dataclass
class Execution:
    final: Fatgraph
    trace: list


def _certified(F, move, genus, exposed, block_non_orientable=False):
    """Apply ``move``; return the result if it meets the certificate, else None."""
    if _kind(F.sigma, F.omega, move.i, move.j) != move.kind:
        return None
    G = apply(F, move)
    D = decompose(G)
    if D.genus != genus or D.h != exposed:
        return None
    if block_non_orientable and not D.block_non_orientable:
        return None
    if r_distance(G) != r_distance(F) - 1:
        return None
    return G


def _first_certified(F, candidates, rule, genus, exposed, block_non_orientable=False):
    for k, move in enumerate(candidates):
        G = _certified(F, move, genus, exposed, block_non_orientable)
        if G is not None:
            return Step(move, rule, genus, exposed, fallback=k > 0), G
    raise InconsistencyError(f"no {rule} candidate meets its certificate on {F}")


def _pair(i, j, kind):
    return Reversal(min(i, j), max(i, j), kind)


# ---------------------------------------------------------------------------
# Block-non-orientable phase
# ---------------------------------------------------------------------------

def _z_score(r, others):
    z = 0
    for o in others:
        if o is r:
            continue
        crosses = ribbons_cross(r, o)
        z += (not o.mono and crosses) or (o.mono and not crosses)
    return z


def _ranked_m_ribbons(rs):
    ms = [r for r in rs if r.mono]
    return sorted(ms, key=lambda r: (-_z_score(r, rs), r.origin))


def best_m_ribbon(F: Fatgraph, component: Component | None = None) -> Ribbon:
    """The m-ribbon whose slicing leaves only non-orientable and trivial pieces.

    It maximizes the number of crossing bi-directional plus non-crossing
    mono-directional ribbons; ties go to the smallest origin.  Without
    ``component`` the fatgraph must be irreducible.
    """
    if component is None:
        comps = components(F)
        if len(comps) != 1:
            raise FatgraphError(f"fatgraph has {len(comps)} components, expected an irreducible one")
        component = comps[0]
    if component.orientable:
        raise FatgraphError("component is orientable, it has no m-ribbon")
    return _ranked_m_ribbons(component.ribbons)[0]


def _merge_candidates(F, D):
    """Slicings that merge an orientable component into an m-adjacent non-orientable one."""
    T = D.tree
    out = []
    orient = [c for c in D.components if c.orientable and not c.trivial]
    nonor = [c for c in D.components if not c.orientable]
    top = 2 * F.n
    for c1, c2 in product(orient, nonor):
        if adjacency(T, c1, c2) != M_ADJACENT:
            continue
        w = shared_white(T, c1, c2)
        # sectors hanging on the shared gap itself (its ends and sibling junctions) would not merge
        g = T.chains[w]
        v = set(common_vertex(T, w))
        firsts = [s for s in _trace(c1) if s in v and s not in g and s <= top]
        seconds = [s for s in _trace(c2) if s in v and s not in g and s <= top]
        for i1 in firsts:
            for i2 in seconds:
                if F.omega[i2] == -F.omega[i1]:
                    out.append(_pair(i1, i2, SLICING))
    return out


def _trace(c: Component):
    return [s for a, b in c.runs for s in range(a, b + 1)]


def _m_slice_candidates(F, D):
    out = []
    for c in D.components:
        if c.orientable:
            continue
        for r in _ranked_m_ribbons(c.ribbons):
            try:
                i, j = m_ribbon_slice_pair(F, r)
            except FatgraphError:
                continue
            out.append(Reversal(i, j, SLICING))
    return out


def _pacman(F):
    D = decompose(F)
    if not D.block_non_orientable:
        raise FatgraphError("fatgraph has an orientable block")
    if D.genus == 0:
        raise FatgraphError("fatgraph is already a plane tree")
    merges = _merge_candidates(F, D)
    if merges:
        return _first_certified(F, merges, MERGE_SLICE, D.genus - 1, 0, True)
    return _first_certified(F, _m_slice_candidates(F, D), M_RIBBON_SLICE, D.genus - 1, 0, True)


def pacman_step(F: Fatgraph) -> Reversal:
    """One slicing that keeps the fatgraph block-non-orientable and lowers the genus."""
    return _pacman(F)[0].move


# ---------------------------------------------------------------------------
# Orientable-block phase
# ---------------------------------------------------------------------------

def _blocks_covered(B, paths):
    out = set()
    for p in paths:
        out |= covered_blocks(B, p)
    return out


def _pairings(items):
    if not items:
        yield []
        return
    a, rest = items[0], items[1:]
    for k, b in enumerate(rest):
        for tail in _pairings(rest[:k] + rest[k + 1:]):
            yield [(a, b)] + tail


def _pair_blocks(B, exposed):
    """Pairs of exposed blocks whose joining paths cover every orientable block."""
    if not exposed or len(exposed) % 2:
        raise FatgraphError(f"need a positive even number of exposed blocks, got {len(exposed)}")
    es = sorted(exposed, key=lambda k: (B.start[k], k))
    k = len(es) // 2
    need = set(B.orientable_blocks())
    first = [(es[t], es[t + k]) for t in range(k)]
    if need <= _blocks_covered(B, [B.path(a, b) for a, b in first]):
        return first, False
    for pairs in _pairings(es):
        if need <= _blocks_covered(B, [B.path(a, b) for a, b in pairs]):
            return pairs, True
    raise InconsistencyError("no pairing of exposed blocks covers every orientable block")


def pair_e_blocks(B, exposed) -> list:
    """Block-tree paths joining the exposed blocks in pairs and covering all orientable blocks."""
    pairs, _ = _pair_blocks(B, exposed)
    return [B.path(a, b) for a, b in pairs]


def _half_flip_candidates(F, D, block_key):
    block = D.block_tree.blocks[block_key]
    top = 2 * F.n
    out = []
    for c in sorted(block.components, key=lambda c: c.start):
        if not c.orientable:
            continue
        for r in sorted(c.ribbons, key=lambda r: r.origin):
            if r.terminus <= top and _kind(F.sigma, F.omega, r.origin, r.terminus) == HALF_FLIPPING:
                out.append(Reversal(r.origin, r.terminus, HALF_FLIPPING))
    return out


def _glue_candidates(F, D, b1, b2):
    """Gluings joining orientable components of blocks ``b1`` and ``b2``."""
    T = D.tree
    B = D.block_tree
    top = 2 * F.n
    out = []
    for c1, c2 in product(B.blocks[b1].components, B.blocks[b2].components):
        if not (c1.orientable and c2.orientable):
            continue
        path = T.path(c1.key, c2.key)
        ends1, ends2 = T.chains[path[1]], T.chains[path[-2]]
        firsts = [s for s in _trace(c1) if s not in ends1 and s <= top]
        seconds = [s for s in _trace(c2) if s not in ends2 and s <= top]
        for i, j in product(firsts, seconds):
            if i != j and _kind(F.sigma, F.omega, min(i, j), max(i, j)) == GLUING:
                out.append(_pair(i, j, GLUING))
    return out


def _odd_glue_candidates(F, D):
    """Gluings from the first super block towards the subtree spanned by the others."""
    B = D.block_tree
    sup = sorted(D.super_blocks, key=lambda k: (B.start[k], k))
    first, rest = sup[0], sup[1:]
    span = set()
    for a in rest:
        for b in rest:
            span.update(B.path(a, b))
    path = min((B.path(first, v) for v in span), key=len)
    target = path[-1]
    out = []
    if target in B.blocks and target != first:
        out = _glue_candidates(F, D, first, target)
    # any gluing from the first super block, nearest targets first
    T = D.tree
    top = 2 * F.n
    starts = [s for c in B.blocks[first].components if c.orientable for s in _trace(c) if s <= top]

    def image(s):
        v = T.attachment(s)
        if v in B.parent:
            return v
        if not is_white(v):
            return B.membership[v[1]]
        return B.membership[T.parent[v][1]]

    rank = {}
    for s in range(1, top + 1):
        rank[s] = len(B.path(image(s), target))
    for j in sorted(range(1, top + 1), key=lambda s: (rank[s], s)):
        for i in starts:
            if i != j and _kind(F.sigma, F.omega, min(i, j), max(i, j)) == GLUING:
                out.append(_pair(i, j, GLUING))
    return out


def _block_phase(F):
    D = decompose(F)
    B = D.block_tree
    if D.block_non_orientable:
        raise FatgraphError("fatgraph has no orientable block")
    g, h = D.genus, D.h
    if h == 0:
        raise InconsistencyError(f"orientable blocks present but none exposed in {F}")
    if h % 2 == 1:
        plain = [x for x in D.exposed if x not in D.super_blocks]
        if h == 1 or plain:
            target = D.exposed[0] if h == 1 else min(plain, key=lambda k: (B.start[k], k))
            cands = _half_flip_candidates(F, D, target)
            return _first_certified(F, cands, BLOCK_HALF_FLIP, g, h - 1) + (False,)
        return _first_certified(F, _odd_glue_candidates(F, D), ODD_GLUE, g + 1, h - 1) + (False,)
    pairs, flagged = _pair_blocks(B, D.exposed)
    a, b = pairs[0]
    cands = _glue_candidates(F, D, a, b)
    return _first_certified(F, cands, PAIR_GLUE, g + 1, h - 2) + (flagged,)


def block_phase_step(F: Fatgraph) -> Reversal:
    """One half-flip or gluing that removes exposed orientable blocks at optimal cost."""
    return _block_phase(F)[0].move


# ---------------------------------------------------------------------------
# Planning and execution
# ---------------------------------------------------------------------------

def plan(F: Fatgraph) -> Plan:
    _require_unicellular(F)
    d = r_distance(F)
    out = Plan(F, [], d)
    G = F
    while not decompose(G).block_non_orientable:
        step, G, flagged = _block_phase(G)
        out.steps.append(step)
        out.pairing_fallback |= flagged
    while euler_genus(G) > 0:
        step, G = _pacman(G)
        out.steps.append(step)
    if len(out.steps) != d:
        raise InconsistencyError(f"plan has {len(out.steps)} steps, formula gives {d}")
    return out


def execute(F: Fatgraph, script) -> Execution:
    """Apply a plan or a list of reversals, recording every intermediate state.

    Steps of a :class:`Plan` are checked against their certificates.
    """
    _require_unicellular(F)
    D = decompose(F)
    trace = [StateRecord(None, F, D.genus, all(c.orientable for c in D.components), D.h)]
    G = F
    for step in script:
        move = step.move if isinstance(step, Step) else step
        if not 1 <= move.i < move.j <= 2 * G.n:
            raise FatgraphError(f"step {move}: sectors out of range for n={G.n}")
        actual = _kind(G.sigma, G.omega, move.i, move.j)
        if actual != move.kind:
            raise FatgraphError(f"step {move} is a {actual} in the current state")
        G = apply(G, move)
        D = decompose(G)
        if isinstance(step, Step) and (D.genus, D.h) != (step.genus, step.exposed):
            raise InconsistencyError(
                f"step {move}: expected genus {step.genus} and {step.exposed} exposed blocks, "
                f"got {D.genus} and {D.h}")
        trace.append(StateRecord(move, G, D.genus, all(c.orientable for c in D.components), D.h))
    return Execution(G, trace)
