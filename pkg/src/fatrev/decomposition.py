"""Components, the component tree and the block tree of a unicellular fatgraph.

Tree vertices are plain tuples so that trees can also be built by hand:

* ``("C", k)``  component ``k`` (components are numbered by trace start),
* ``("W", (p, q))``  a gap ``[p, q]``; the root interval ``[1, 2n+1]`` uses the
  same shape,
* ``("B", k)``  block ``k`` (block tree only; trivial components keep their
  ``("C", k)`` key there).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .core import (
    Fatgraph,
    FatgraphError,
    InconsistencyError,
    _require_unicellular,
    euler_genus,
    induced_fatgraph,
    ribbons,
    ribbons_cross,
)

NOT_ADJACENT = "not-adjacent"
ADJACENT = "adjacent"
M_ADJACENT = "m-adjacent"


def is_white(node) -> bool:
    return node[0] == "W"


def is_black(node) -> bool:
    return node[0] != "W"


@dataclass(frozen=True)
class Component:
    index: int
    ribbons: tuple
    sectors: frozenset
    runs: tuple
    gaps: tuple
    trivial: bool
    orientable: bool
    genus: int

    @property
    def key(self):
        return ("C", self.index)

    @property
    def start(self) -> int:
        return self.runs[0][0]

    @property
    def end(self) -> int:
        return self.runs[-1][1]

    def in_interior(self, s: int) -> bool:
        return any(a < s < c for a, c in self.runs)

    def __str__(self):
        trace = "u".join(f"[{a},{c}]" for a, c in self.runs)
        return f"C{self.index}{trace}"


def _runs(sectors):
    out = []
    for x in sorted(sectors):
        if out and out[-1][1] == x - 1:
            out[-1][1] = x
        else:
            out.append([x, x])
    return tuple((a, c) for a, c in out)


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


_CACHE: dict = {}


def _memo(kind, F, build):
    key = (kind, F)
    hit = _CACHE.get(key)
    if hit is None:
        if len(_CACHE) > 20000:
            _CACHE.clear()
        hit = _CACHE[key] = build(F)
    return hit


def components(F: Fatgraph) -> list[Component]:
    """Crossing-equivalence classes of ribbons, numbered by trace start."""
    _require_unicellular(F)
    return list(_memo("components", F, _components))


def _components(F):
    rs = ribbons(F)
    uf = _UnionFind(len(rs))
    for a, b in combinations(range(len(rs)), 2):
        if ribbons_cross(rs[a], rs[b]):
            uf.union(a, b)
    classes = {}
    for k, r in enumerate(rs):
        classes.setdefault(uf.find(k), []).append(r)
    out = []
    for members in classes.values():
        secs = frozenset().union(*(r.sectors for r in members))
        runs = _runs(secs)
        if any(a == c for a, c in runs):
            raise InconsistencyError(f"component trace has a one-sector run: {runs}")
        gaps = tuple((runs[k][1], runs[k + 1][0]) for k in range(len(runs) - 1))
        orientable = not any(r.mono for r in members)
        trivial = len(members) == 1 and orientable
        sub = induced_fatgraph(F, members)
        out.append((runs[0][0], tuple(members), secs, runs, gaps, trivial, orientable, euler_genus(sub)))
    out.sort(key=lambda t: t[0])
    return tuple(Component(k, *t[1:]) for k, t in enumerate(out))


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

class _Tree:
    """Rooted tree on tuple keys with parent pointers."""

    def __init__(self, root, parent: dict):
        self.root = root
        self.parent = dict(parent)
        self.parent.setdefault(root, None)
        self.children = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                self.children[p].append(v)
        for v in self.children:
            self.children[v].sort(key=self._order)
        self.depth = {}
        todo = deque([root])
        self.depth[root] = 0
        while todo:
            v = todo.popleft()
            for c in self.children[v]:
                self.depth[c] = self.depth[v] + 1
                todo.append(c)
        if len(self.depth) != len(self.parent):
            raise InconsistencyError("tree is not connected to its root")

    def _order(self, v):
        return (0, v[1]) if isinstance(v[1], int) else (1, v[1])

    @property
    def nodes(self):
        return list(self.parent)

    def neighbors(self, v):
        out = list(self.children[v])
        if self.parent[v] is not None:
            out.append(self.parent[v])
        return out

    def path(self, u, v) -> list:
        """Vertices on the tree path from ``u`` to ``v``, both included."""
        left, right = [], []
        while u != v:
            if self.depth[u] >= self.depth[v]:
                left.append(u)
                u = self.parent[u]
            else:
                right.append(v)
                v = self.parent[v]
        return left + [u] + right[::-1]

    def distance(self, u, v) -> int:
        return len(self.path(u, v)) - 1

    def edges(self):
        return [(p, v) for v, p in self.parent.items() if p is not None]


class ComponentTree(_Tree):
    """Bicolored tree of components (black) and gaps (white)."""

    def __init__(self, F: Fatgraph, comps: list[Component], root, parent: dict, chains: dict):
        self.fatgraph = F
        self.components = comps
        self.chains = chains
        super().__init__(root, parent)

    def component(self, node) -> Component:
        return self.components[node[1]]

    def attachment(self, s: int):
        """The tree vertex sector ``s`` is attached to."""
        if not 1 <= s <= self.fatgraph.size:
            raise FatgraphError(f"sector {s} out of range 1..{self.fatgraph.size}")
        for c in self.components:
            if c.in_interior(s):
                return c.key
        best = None
        for w, chain in self.chains.items():
            p, q = w[1]
            if p <= s <= q and (best is None or q - p < best[1][1] - best[1][0]):
                best = w
        if best is None or s not in self.chains[best]:
            raise InconsistencyError(f"sector {s} is attached to no tree vertex")
        return best


def component_tree(F: Fatgraph) -> ComponentTree:
    _require_unicellular(F)
    return _memo("ctree", F, _component_tree)


def _inside(inner: Component, lo, hi):
    return lo <= inner.start and inner.end <= hi


def _component_tree(F):
    comps = components(F)
    root = ("W", (1, F.size))
    gaps = [(c, g) for c in comps for g in c.gaps]
    # Traces never interleave: one is nested in a gap of the other or they follow each other.
    for a, b in combinations(comps, 2):
        if a.end <= b.start or b.end <= a.start:
            continue
        if any(_inside(b, *g) for g in a.gaps) or any(_inside(a, *g) for g in b.gaps):
            continue
        raise InconsistencyError(f"traces of {a} and {b} interleave")
    parent = {root: None}
    for c, g in gaps:
        parent[("W", g)] = c.key
    for c in comps:
        holders = [g for d, g in gaps if d is not c and _inside(c, *g)]
        parent[c.key] = ("W", min(holders, key=lambda g: g[1] - g[0])) if holders else root
    chains = {}
    for w in [root] + [("W", g) for _, g in gaps]:
        kids = sorted((comps[k[1]] for k, p in parent.items() if p == w and k[0] == "C"),
                      key=lambda c: c.start)
        p, q = w[1]
        chain = [p]
        for c in kids:
            if c.start != chain[-1]:
                raise InconsistencyError(f"children of {w[1]} do not tile it")
            chain.append(c.end)
        if chain[-1] != q:
            raise InconsistencyError(f"children of {w[1]} do not tile it")
        chains[w] = frozenset(chain)
    return ComponentTree(F, comps, root, parent, chains)


def attachment(F: Fatgraph, s: int):
    return component_tree(F).attachment(s)


def tree_path(T: ComponentTree, i: int, j: int) -> list[Component]:
    """Components on the tree path between the attachments of ``i`` and ``j``."""
    path = T.path(T.attachment(i), T.attachment(j))
    return [T.component(v) for v in path if is_black(v)]


def common_vertex(T: ComponentTree, white) -> tuple[int, ...]:
    """The fatgraph vertex that carries every chain sector of a white tree vertex."""
    F = T.fatgraph
    chain = T.chains[white]
    cyc = F.vertex_of(min(chain))
    if not chain <= set(cyc):
        raise InconsistencyError(f"chain sectors {sorted(chain)} of {white[1]} lie at several vertices")
    return cyc


def adjacency(T: ComponentTree, c1: Component, c2: Component) -> str:
    if c1 == c2:
        raise FatgraphError("adjacency of a component with itself")
    path = T.path(c1.key, c2.key)
    if len(path) != 3:
        return NOT_ADJACENT
    v = set(common_vertex(T, path[1]))
    for r in c1.ribbons + c2.ribbons:
        if r.mono and (r.wedge_a[0] in v or r.wedge_b[0] in v):
            return M_ADJACENT
    return ADJACENT


def shared_white(T: ComponentTree, c1: Component, c2: Component):
    path = T.path(c1.key, c2.key)
    return path[1] if len(path) == 3 else None


# ---------------------------------------------------------------------------
# Blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    index: int
    components: tuple
    orientable: bool

    @property
    def key(self):
        return ("B", self.index)

    @property
    def sectors(self) -> frozenset:
        return frozenset().union(*(c.sectors for c in self.components))

    @property
    def start(self) -> int:
        return min(c.start for c in self.components)

    def __str__(self):
        return f"B{self.index}{{{','.join('C%d' % c.index for c in self.components)}}}"


class BlockTree(_Tree):
    """Bicolored tree of blocks and trivial components (black) and gaps (white).

    ``orientable`` maps block keys to their orientability; trivial components
    are black but never count as blocks.  ``start`` orders blocks.
    """

    def __init__(self, root, parent: dict, blocks: dict, orientable: dict, start: dict | None = None,
                 membership: dict | None = None):
        self.blocks = dict(blocks)
        self.orientable = dict(orientable)
        self.start = dict(start) if start else {k: k[1] for k in self.blocks}
        self.membership = dict(membership or {})
        super().__init__(root, parent)

    @classmethod
    def from_edges(cls, edges, orientable: dict, root=("W", (0, 0)), start: dict | None = None):
        """Build a block tree by hand from undirected edges; used by tests."""
        adj = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        parent = {root: None}
        todo = [root]
        while todo:
            u = todo.pop()
            for v in adj.get(u, []):
                if v not in parent:
                    parent[v] = u
                    todo.append(v)
        return cls(root, parent, {k: None for k in orientable}, orientable, start)

    @property
    def block_keys(self) -> list:
        return sorted(self.blocks, key=lambda k: (self.start[k], k))

    def orientable_blocks(self, override=()) -> list:
        return [k for k in self.block_keys if self.orientable[k] and k not in override]

    def block_of(self, component: Component):
        return self.membership[component.index]


def block_tree(F: Fatgraph) -> BlockTree:
    _require_unicellular(F)
    return _memo("btree", F, _block_tree)


def blocks(F: Fatgraph) -> list[Block]:
    B = block_tree(F)
    return [B.blocks[k] for k in B.block_keys]


def _block_tree(F):
    T = component_tree(F)
    comps = T.components
    trivial = {c.key for c in comps if c.trivial}
    # pieces of T once trivial components are deleted
    piece = {}
    for v in T.nodes:
        if v in trivial or v in piece:
            continue
        piece[v] = v
        todo = [v]
        while todo:
            u = todo.pop()
            for x in T.neighbors(u):
                if x not in trivial and x not in piece:
                    piece[x] = v
                    todo.append(x)
    members = {}
    for v, p in piece.items():
        if is_black(v):
            members.setdefault(p, []).append(T.component(v))
    ordered = sorted(members.values(), key=lambda cs: min(c.start for c in cs))
    block_of_piece = {}
    blocks_ = {}
    for k, cs in enumerate(ordered):
        cs = tuple(sorted(cs, key=lambda c: c.start))
        b = Block(k, cs, all(c.orientable for c in cs))
        blocks_[b.key] = b
        block_of_piece[piece[cs[0].key]] = b.key
    kept = {T.root} | {v for v in T.nodes if is_white(v) and any(x in trivial for x in T.neighbors(v))}

    def image(v):
        if v in trivial or v in kept:
            return v
        return block_of_piece[piece[v]]

    adj = {}
    for p, v in T.edges():
        a, b = image(p), image(v)
        if a != b:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    parent = {T.root: None}
    todo = [T.root]
    while todo:
        u = todo.pop()
        for v in adj.get(u, ()):
            if v not in parent:
                parent[v] = u
                todo.append(v)
    n_edges = sum(len(s) for s in adj.values()) // 2
    if n_edges != len(parent) - 1:
        raise InconsistencyError("block tree contraction produced a cycle")
    for w in kept:
        if sum(1 for x in adj.get(w, ()) if x[0] == "B") > 1:
            raise InconsistencyError(f"gap {w[1]} touches two blocks")
    membership = {}
    for b in blocks_.values():
        for c in b.components:
            membership[c.index] = b.key
    for k in trivial:
        membership[k[1]] = k
    return BlockTree(T.root, parent, blocks_, {k: b.orientable for k, b in blocks_.items()},
                     {k: b.start for k, b in blocks_.items()}, membership)


def covered_blocks(B: BlockTree, path) -> set:
    """Blocks on ``path`` or adjacent to a white vertex on it."""
    on = set(path)
    out = {v for v in on if v in B.blocks}
    for w in on:
        if is_white(w):
            out.update(x for x in B.neighbors(w) if x in B.blocks)
    return out


def e_blocks(B: BlockTree, override=()) -> list:
    """Exposed blocks: orientable and not covered by a path joining two other orientable blocks.

    ``override`` names blocks to treat as non-orientable.
    """
    orient = B.orientable_blocks(override)
    out = []
    for x in orient:
        others = [y for y in orient if y != x]
        if not any(x in covered_blocks(B, B.path(y, z)) for y, z in combinations(others, 2)):
            out.append(x)
    if len(orient) >= 2:
        leafy = _leaf_criterion(B, orient)
        if set(leafy) != set(out):
            raise InconsistencyError(f"E-block criteria disagree: coverage {out}, leaves {leafy}")
    return out


def _leaf_criterion(B: BlockTree, orient):
    sub = set()
    for y, z in combinations(orient, 2):
        sub.update(B.path(y, z))
    deg = {v: sum(1 for x in B.neighbors(v) if x in sub) for v in sub}
    out = []
    for x in orient:
        if deg[x] == 1:
            (w,) = [v for v in B.neighbors(x) if v in sub]
            if deg[w] == 2:
                out.append(x)
    return out


def s_blocks(B: BlockTree, exposed=None) -> list:
    exposed = e_blocks(B) if exposed is None else exposed
    h = len(exposed)
    return [x for x in exposed if len(e_blocks(B, override=(x,))) == h]


def block_path(B: BlockTree, T: ComponentTree, i: int, j: int) -> list:
    """Block-tree path between the blocks (or retained vertices) of the attachments of ``i`` and ``j``."""
    return B.path(_block_image(B, T, T.attachment(i)), _block_image(B, T, T.attachment(j)))


def _block_image(B: BlockTree, T: ComponentTree, v):
    if is_black(v):
        return B.membership[v[1]]
    if v in B.parent:
        return v
    # a white contracted into its block: the block of its owning component
    owner = T.parent[v]
    return B.membership[owner[1]]


@dataclass
class Decomposition:
    components: list
    tree: ComponentTree
    block_tree: BlockTree
    exposed: list
    super_blocks: list
    genus: int = field(default=0)

    @property
    def h(self) -> int:
        return len(self.exposed)

    @property
    def all_super(self) -> bool:
        return bool(self.exposed) and len(self.super_blocks) == len(self.exposed)

    @property
    def block_non_orientable(self) -> bool:
        return not self.block_tree.orientable_blocks()


def decompose(F: Fatgraph) -> Decomposition:
    _require_unicellular(F)
    return _memo("decomposition", F, _decompose)


def _decompose(F):
    B = block_tree(F)
    ex = e_blocks(B)
    return Decomposition(components(F), component_tree(F), B, ex, s_blocks(B, ex), euler_genus(F))
