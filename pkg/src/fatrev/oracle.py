"""Ground truth for the formula and the planner.

* exhaustive breadth-first reversal distance,
* orientability by brute force over vertex flips,
* enumeration and random generation of small fatgraphs,
* a reversal built from a boundary walk, independent of the sign rules used
  by :mod:`fatrev.reversals`,
* a battery of per-move property checks.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field

from .core import (
    AMBIGUOUS,
    TWISTED,
    UNTWISTED,
    Fatgraph,
    FatgraphError,
    InconsistencyError,
    _require_unicellular,
    canonical_form,
    canonical_representative,
    euler_genus,
    flip_vertex,
    flippable,
    negate,
    ribbons,
    ribbons_cross,
    validate,
)
from .decomposition import block_path, covered_blocks, decompose, tree_path
from .reversals import (
    GLUING,
    HALF_FLIPPING,
    SLICING,
    Reversal,
    apply,
    classify_reversal,
    half_edge_track,
    legal_reversals,
    m_ribbon_slice_pair,
    successors,
)

log = logging.getLogger(__name__)

MAX_ENUMERATION_N = 4


class StateBoundExceeded(RuntimeError):
    pass


class AmbiguousTwist(RuntimeError):
    """The two readings of an ambiguous ribbon twist disagree on orientability."""


# ---------------------------------------------------------------------------
# Breadth-first distance
# ---------------------------------------------------------------------------

@dataclass
class StateSpaceReport:
    start: bytes
    states: int
    distance: int
    moves: list
    layers: list = field(default_factory=list)


def bfs_distance(F: Fatgraph, state_bound: int = 200_000, pruned: bool = True) -> StateSpaceReport:
    """Exact reversal distance from ``F`` to a genus-0 fatgraph.

    States are keyed by canonical form.  With ``pruned`` the search is run
    with growing depth bounds ``D = g, g+1, ...`` and drops states whose depth
    plus genus exceeds ``D``; one reversal changes the genus by at most one,
    so no shortest path is lost.  ``state_bound`` caps the distinct states of
    a single search.
    """
    _require_unicellular(F)
    g = euler_genus(F)
    if not pruned:
        return _bfs(F, None, state_bound)
    bound = g
    while True:
        report = _bfs(F, bound, state_bound)
        if report is not None:
            return report
        bound += 1


def _bfs(F, bound, state_bound):
    start = canonical_form(F)
    seen = {start: (None, None)}
    layer = [(start, F)]
    layers = [1]
    depth = 0
    while layer:
        for key, G in layer:
            if euler_genus(G) == 0:
                return StateSpaceReport(start, len(seen), depth, _path(seen, key), layers)
        nxt = []
        for key, G in layer:
            for move, H in successors(G):
                if bound is not None and depth + 1 + euler_genus(H) > bound:
                    continue
                k = canonical_form(H)
                if k in seen:
                    continue
                seen[k] = (key, move)
                if len(seen) > state_bound:
                    raise StateBoundExceeded(f"more than {state_bound} states explored")
                nxt.append((k, H))
        layer = nxt
        depth += 1
        if layer:
            layers.append(len(layer))
    if bound is None:
        raise InconsistencyError(f"no plane tree reachable from {F}")
    return None


def _path(seen, key):
    out = []
    while seen[key][0] is not None:
        key, move = seen[key]
        out.append(move)
    return out[::-1]


# ---------------------------------------------------------------------------
# Orientability by brute force
# ---------------------------------------------------------------------------

def _twists(F):
    report = validate(F.n, F.sigma, F.omega, F.gamma)
    if not report.ok:
        raise FatgraphError(f"invalid fatgraph:\n{report}")
    return [report.cases[x] for x in report.partner if x < report.partner[x]]


def orientability_oracle(F: Fatgraph) -> bool:
    """True iff flipping some set of vertices makes every ribbon untwisted.

    Flipping every vertex leaves all twists as they are, so subsets of the
    non-root vertices suffice.  Ambiguous twists are read both ways and the two
    answers must agree.
    """
    _require_unicellular(F)
    verts = [v for v in F.vertices() if 1 not in v and flippable(F, v[0])]
    answers = set()
    for ambiguous_as in (UNTWISTED, TWISTED):
        found = False
        for k in range(len(verts) + 1):
            for subset in itertools.combinations(verts, k):
                G = F
                for v in subset:
                    G = flip_vertex(G, v[0])
                tw = [ambiguous_as if t == AMBIGUOUS else t for t in _twists(G)]
                if all(t == UNTWISTED for t in tw):
                    found = True
                    break
            if found:
                break
        answers.add(found)
    if len(answers) > 1:
        log.warning("ambiguous twist readings disagree on %s", F)
        raise AmbiguousTwist(f"ambiguous twist readings disagree on orientability of {F}")
    return answers.pop()


def has_ambiguous_twist(F: Fatgraph) -> bool:
    return AMBIGUOUS in _twists(F)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _star(n):
    """Plane tree with all ``n`` edges at the root vertex."""
    s = [0] * (2 * n + 2)
    odd = list(range(1, 2 * n + 2, 2))
    for a, b in zip(odd, odd[1:] + odd[:1]):
        s[a] = b
    for e in range(2, 2 * n + 1, 2):
        s[e] = e
    return Fatgraph(n, tuple(s), (0,) + (1,) * (2 * n + 1))


def _brute_force(n):
    m = 2 * n + 1
    seen = set()
    # sigma(2n+1) = 1 pins the root; sigma(1..2n) is any arrangement of 2..2n+1
    for images in itertools.permutations(range(2, m + 1)):
        s = (0,) + images + (1,)
        for signs in itertools.product((1, -1), repeat=m - 1):
            w = (0,) + signs + (signs[0],)
            if not validate(n, s, w).ok:
                continue
            F = Fatgraph(n, s, w)
            key = canonical_form(F)
            if key not in seen:
                seen.add(key)
                yield canonical_representative(F)


def _closure(n):
    seen = {}
    todo = []
    for seed in (_star(n), negate(_star(n))):
        k = canonical_form(seed)
        if k not in seen:
            seen[k] = canonical_representative(seed)
            todo.append(seed)
    while todo:
        F = todo.pop()
        for _, G in successors(F):
            k = canonical_form(G)
            if k not in seen:
                seen[k] = canonical_representative(G)
                todo.append(G)
    return [seen[k] for k in sorted(seen)]


def enumerate_fatgraphs(n: int, method: str | None = None) -> list[Fatgraph]:
    """Every rooted unicellular fatgraph with ``n`` ribbons, one per canonical class.

    ``method="brute"`` tries all permutations and sign vectors (used up to
    ``n = 3``); ``method="closure"`` collects everything reachable by
    reversals from the plane trees.  The default picks brute force for small
    ``n``.
    """
    if not 1 <= n <= MAX_ENUMERATION_N:
        raise FatgraphError(f"enumeration is limited to 1 <= n <= {MAX_ENUMERATION_N}, got {n}")
    method = method or ("brute" if n <= 3 else "closure")
    if method == "brute":
        out = {canonical_form(F): F for F in _brute_force(n)}
        return [out[k] for k in sorted(out)]
    if method == "closure":
        return _closure(n)
    raise FatgraphError(f"unknown enumeration method {method!r}")


# ---------------------------------------------------------------------------
# Random generation
# ---------------------------------------------------------------------------

def from_chords(tokens) -> Fatgraph:
    """All-positive fatgraph whose ribbons pair equal tokens along the boundary.

    ``tokens`` has length ``2n``; each label occurs twice.  Non-crossing
    tokens give a plane tree.
    """
    n, odd = divmod(len(tokens), 2)
    if odd or n < 1:
        raise FatgraphError("chord word must have positive even length")
    where = {}
    for p, t in enumerate(tokens):
        where.setdefault(t, []).append(p + 2)
    if any(len(v) != 2 for v in where.values()):
        raise FatgraphError("every chord label must occur exactly twice")
    mate = {1: 1}
    for a, b in where.values():
        mate[a], mate[b] = b, a
    m = 2 * n + 1
    s = [0] * (m + 1)
    for c in range(1, m):
        s[c] = mate[c + 1]
    s[m] = 1
    return Fatgraph(n, tuple(s), (0,) + (1,) * m)


def random_plane_tree(n: int, rng: random.Random) -> Fatgraph:
    """Uniform plane tree with ``n`` edges (cycle lemma on a bracket word)."""
    steps = [1] * n + [-1] * (n + 1)
    rng.shuffle(steps)
    # rotate to start just after the first minimum of the prefix sums
    low, at, h = 0, 0, 0
    for k, x in enumerate(steps):
        h += x
        if h < low:
            low, at = h, k + 1
    word = (steps[at:] + steps[:at])[:-1]
    stack, tokens = [], []
    for k, x in enumerate(word):
        if x > 0:
            stack.append(k)
            tokens.append(k)
        else:
            tokens.append(stack.pop())
    return from_chords(tokens)


def random_fatgraph(n: int, target_genus: int, seed: int, retries: int = 20) -> Fatgraph:
    """A random plane tree followed by ``target_genus`` random gluings."""
    if n < 1 or target_genus < 0:
        raise FatgraphError("need n >= 1 and target_genus >= 0")
    if target_genus > n:
        raise FatgraphError(f"Euler genus of {n} ribbons is at most {n}, got {target_genus}")
    rng = random.Random(seed)
    for _ in range(retries):
        F = random_plane_tree(n, rng)
        for _ in range(target_genus):
            glues = [m for m in legal_reversals(F) if m.kind == GLUING]
            if not glues:
                break
            F = apply(F, rng.choice(glues))
        else:
            return F
    raise FatgraphError(f"no gluing sequence reached genus {target_genus} with {n} ribbons")


def _cluster_word(budget, rng, labels):
    out = []
    while budget > 0:
        if budget >= 2 and rng.random() < 0.6:
            k = rng.randint(2, min(3, budget))
            ls = [next(labels) for _ in range(k)]
            budget -= k
            pieces = [[t] for t in ls + ls]
            for p in pieces[:-1]:
                if budget >= 2 and rng.random() < 0.35:
                    inner = rng.randint(1, min(budget - 1, 6))
                    w = next(labels)
                    p += [w] + _cluster_word(inner, rng, labels) + [w]
                    budget -= 1 + inner
            out += [t for p in pieces for t in p]
        elif budget >= 2:
            w = next(labels)
            inner = rng.randint(1, min(budget - 1, 6))
            out += [w] + _cluster_word(inner, rng, labels) + [w]
            budget -= 1 + inner
        else:
            w = next(labels)
            out += [w, w]
            budget -= 1
    return out


def random_clustered_fatgraph(n: int, seed: int, flips: int | None = None) -> Fatgraph:
    """Crossing clusters hung inside each other's gaps, then a few half-flips.

    These carry several orientable blocks, which plane trees plus gluings
    almost never do.
    """
    if n < 1:
        raise FatgraphError("need n >= 1")
    rng = random.Random(seed)
    F = from_chords(_cluster_word(n, rng, itertools.count()))
    flips = rng.randint(0, 2) if flips is None else flips
    for _ in range(flips):
        hf = [m for m in legal_reversals(F) if m.kind == HALF_FLIPPING]
        if not hf:
            break
        F = apply(F, rng.choice(hf))
    return F


def random_walk_fatgraph(n: int, steps: int, seed: int) -> Fatgraph:
    rng = random.Random(seed)
    F = random_plane_tree(n, rng)
    for _ in range(steps):
        F = apply(F, rng.choice(legal_reversals(F)))
    return F


# ---------------------------------------------------------------------------
# Reversal from a boundary walk
# ---------------------------------------------------------------------------

def _half_edges(F):
    """Half-edge id -> (partner id, twisted)."""
    report = validate(F.n, F.sigma, F.omega)
    s = F.sigma
    return {s[x]: (s[y], report.cases[x] == TWISTED) for x, y in report.partner.items()}


def _walk(n, s, he, w1):
    """Boundary walk of the surface given by corners ``s`` and glued half-edges ``he``.

    Returns the face permutation and the orientation each corner is passed
    with, or None if the walk revisits a corner before closing.
    """
    m = 2 * n + 1
    inv = [0] * (m + 1)
    for k in range(1, m + 1):
        inv[s[k]] = k
    face = [0] * (m + 1)
    om = [0] * (m + 1)
    c, d = 1, 1
    om[1] = w1
    while True:
        e, before = (s[c], True) if d > 0 else (c, False)
        if e == 1:
            face[c] = 1
            break
        if e not in he:
            return None
        f, twisted = he[e]
        lands_before = before if twisted else not before
        nc, nd = (inv[f], -1) if lands_before else (f, 1)
        face[c] = nc
        if om[nc]:
            return None
        om[nc] = nd * w1
        c, d = nc, nd
    return face, om


def _reversed_boundary(n, i, j):
    m = 2 * n + 1
    order = list(range(1, i + 1)) + list(range(j - 1, i, -1)) + list(range(j, m + 1))
    out = [0] * (m + 1)
    for a, b in zip(order, order[1:] + order[:1]):
        out[a] = b
    return out


def _surgeries(F, i, j, kind):
    """Corner permutations and half-edge gluings for every way of cutting and rejoining."""
    if kind != HALF_FLIPPING:
        bases = [F]
        if F.omega[i] == F.omega[j]:
            bases = [flip_vertex(F, F.vertex_id(x)) for x in (j, i) if flippable(F, x)]
        for G in bases:
            s, he = list(G.sigma), _half_edges(G)
            a = s[:]
            a[i], a[j] = s[j], s[i]
            yield a, he
            sw = {i: j, j: i}
            yield [sw.get(x, x) for x in s], {sw.get(e, e): (sw.get(f, f), t) for e, (f, t) in he.items()}
        return
    s0, he0 = list(F.sigma), _half_edges(F)
    for a, b in ((i, j), (j, i)):
        part = []
        x = s0[a]
        while x != b:
            part.append(x)
            x = s0[x]
        turned = [b] + part
        prev = {turned[k]: turned[k - 1] for k in range(len(turned))}
        he = {prev.get(e, e): (prev.get(f, f), t ^ ((e in turned) != (f in turned)))
              for e, (f, t) in he0.items()}
        s = s0[:]
        if part:
            s[a] = part[-1]
            for k in range(len(part) - 1, 0, -1):
                s[part[k]] = part[k - 1]
            s[part[0]] = b
        yield s, he
        sw = {i: j, j: i}
        s2 = [0] * len(s)
        for x in range(1, len(s)):
            s2[sw.get(x, x)] = sw.get(s[x], s[x])
        yield s2, {sw.get(e, e): (sw.get(f, f), t) for e, (f, t) in he.items()}


def reference_reversal(F: Fatgraph, i: int, j: int) -> list[Fatgraph]:
    """Every result of the ``i, j``-reversal obtainable by cutting and regluing corners.

    Candidates are rebuilt by walking the boundary of the new surface; those
    whose boundary is the old one with ``i+1 .. j-1`` reversed are relabeled
    and kept.  The sign rules of :mod:`fatrev.reversals` are not used.
    """
    kind = classify_reversal(F, i, j)
    n, m = F.n, F.size
    want = _reversed_boundary(n, i, j)
    rho = [k if not i < k < j else i + j - k for k in range(m + 1)]
    out = []
    for s, he in _surgeries(F, i, j, kind):
        if s[m] != 1:
            continue
        walked = _walk(n, s, he, F.omega[1])
        if walked is None or walked[0] != want:
            continue
        s2 = [0] * (m + 1)
        w2 = [0] * (m + 1)
        for k in range(1, m + 1):
            s2[rho[k]] = rho[s[k]]
            w2[rho[k]] = walked[1][k]
        G = Fatgraph(n, tuple(s2), tuple(w2))
        if G not in out:
            out.append(G)
    return out


# ---------------------------------------------------------------------------
# Property battery
# ---------------------------------------------------------------------------

@dataclass
class PropertyReport:
    move: Reversal
    results: dict = field(default_factory=dict)   # contract -> bool
    details: dict = field(default_factory=dict)   # contract -> counterexample text

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def record(self, name, ok, detail=""):
        self.results[name] = self.results.get(name, True) and ok
        if not ok and name not in self.details:
            self.details[name] = detail

    def __str__(self):
        lines = [f"{self.move}:"]
        for k, v in self.results.items():
            lines.append(f"  {k}: {'pass' if v else 'FAIL ' + self.details.get(k, '')}")
        return "\n".join(lines)


def intersects(r, i: int, j: int) -> bool:
    """Whether ribbon ``r`` sticks out of the interval ``[i, j]`` on exactly one side."""
    return r.origin < i < r.terminus <= j or i <= r.origin < j < r.terminus


def _key(r, track=None):
    return frozenset(track[h] for h in r.half_edges) if track else frozenset(r.half_edges)


def check_properties(F: Fatgraph, move: Reversal) -> PropertyReport:
    """Apply ``move`` and recheck every local contract by recomputation."""
    rep = PropertyReport(move)
    i, j = move.i, move.j
    if classify_reversal(F, i, j) != move.kind:
        raise FatgraphError(f"{move} is not legal in {F}")
    track = half_edge_track(F)
    G = apply(F, move, track)

    check = validate(G.n, G.sigma, G.omega)
    rep.record("unicellular", check.ok, str(check))
    if not check.ok:
        return rep
    rep.record("boundary-walk", G in reference_reversal(F, i, j), f"{G} not among the walked results")
    expected = {GLUING: 1, SLICING: -1, HALF_FLIPPING: 0}[move.kind]
    rep.record("genus-change", euler_genus(G) - euler_genus(F) == expected,
               f"genus {euler_genus(F)} -> {euler_genus(G)}")

    before = ribbons(F)
    after = {_key(r): r for r in ribbons(G)}
    image = {}
    for r in before:
        k = _key(r, track)
        if k not in after:
            rep.record("ribbon-tracking", False, f"ribbon {r} has no image")
            return rep
        image[r] = after[k]
    rep.record("ribbon-tracking", True)

    for r in before:
        changed = r.mono != image[r].mono
        rep.record("direction-change", changed == intersects(r, i, j),
                   f"ribbon {r}: direction changed={changed}, intersects={intersects(r, i, j)}")
    for a, b in itertools.combinations(before, 2):
        changed = ribbons_cross(a, b) != ribbons_cross(image[a], image[b])
        both = intersects(a, i, j) and intersects(b, i, j)
        rep.record("crossing-change", changed == both, f"ribbons {a}, {b}: changed={changed}, both={both}")

    sliced = [r for r in before if r.mono and _slice_pair(F, r) == (i, j)]
    if move.kind == SLICING and sliced:
        r = sliced[0]
        for a, b in itertools.combinations([x for x in before if x is not r], 2):
            changed = ribbons_cross(a, b) != ribbons_cross(image[a], image[b])
            both = ribbons_cross(a, r) and ribbons_cross(b, r)
            rep.record("m-ribbon-slice-crossing", changed == both, f"ribbons {a}, {b} around {r}")
        rep.record("m-ribbon-slice-trivial", not image[r].mono and not any(
            ribbons_cross(image[r], image[x]) for x in before if x is not r), f"{r} not trivial after slicing")

    _check_decomposition(F, G, track, i, j, rep)
    return rep


def _slice_pair(F, r):
    try:
        return m_ribbon_slice_pair(F, r)
    except FatgraphError:
        return None


def _check_decomposition(F, G, track, i, j, rep):
    D, DG = decompose(F), decompose(G)
    T, B = D.tree, D.block_tree
    comp_of = {_key(r): c for c in DG.components for r in c.ribbons}
    on_path = tree_path(T, i, j)
    on = {c.index for c in on_path}
    for c in D.components:
        if c.index in on:
            continue
        imgs = {comp_of[_key(r, track)].index for r in c.ribbons}
        ok = len(imgs) == 1
        if ok:
            d = DG.components[imgs.pop()]
            ok = {_key(r) for r in d.ribbons} == {_key(r, track) for r in c.ribbons} and d.orientable == c.orientable
        rep.record("off-path-components", ok, f"component {c} off the path changed")
    if len(on_path) >= 2:
        imgs = {comp_of[_key(r, track)].index for c in on_path for r in c.ribbons}
        rep.record("on-path-merge", len(imgs) == 1, f"path components went to {sorted(imgs)}")

    block_of = {}
    for b in DG.block_tree.blocks.values():
        for c in b.components:
            for r in c.ribbons:
                block_of[_key(r)] = b
    Q = block_path(B, T, i, j)
    cov = covered_blocks(B, Q)
    for k, b in B.blocks.items():
        if k in cov:
            continue
        keys = {_key(r, track) for c in b.components for r in c.ribbons}
        imgs = {block_of.get(x) for x in keys}
        ok = len(imgs) == 1 and None not in imgs
        if ok:
            nb = imgs.pop()
            ok = {_key(r) for c in nb.components for r in c.ribbons} == keys and nb.orientable == b.orientable
        rep.record("off-path-blocks", ok, f"block {b} not covered by the path changed")
    if len(on_path) >= 2:
        keys = set()
        for k in cov:
            keys |= {_key(r, track) for c in B.blocks[k].components for r in c.ribbons}
        for v in Q:
            if v[0] == "C":
                keys |= {_key(r, track) for r in D.components[v[1]].ribbons}
        imgs = {id(block_of.get(x)) for x in keys}
        rep.record("covered-blocks-merge", len(imgs) == 1 and id(None) not in imgs,
                   "covered blocks did not merge into one")
    drop = (D.genus + D.h) - (DG.genus + DG.h)
    rep.record("genus-plus-exposed", drop <= 1, f"g+h dropped by {drop}")
