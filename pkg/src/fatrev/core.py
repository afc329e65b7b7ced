"""Rooted fatgraphs given by sector permutations.

A rooted fatgraph with ``n`` ribbons lives on the sector labels ``1 .. 2n+1``.
``sigma`` is the vertex permutation (its cycles are vertices), ``omega`` the
orientation of every sector and ``gamma`` the boundary permutation.  For
unicellular fatgraphs ``gamma`` is the standard cycle ``(1 2 ... 2n+1)`` and is
left implicit.  Sector ``2n+1`` is the second half of the bisected root sector,
so ``sigma(2n+1) = gamma(2n+1) = 1``.

Permutations are stored as padded tuples: ``sigma[k]`` is the image of ``k``
and index 0 is an unused ``0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

UNTWISTED = "untwisted"
TWISTED = "twisted"
AMBIGUOUS = "ambiguous"
MONO = "mono"
BI = "bi"


class FatgraphError(ValueError):
    """Invalid input: a malformed fatgraph, an illegal move, a bad file."""


class InconsistencyError(RuntimeError):
    """An internal consistency check failed.

    Raised when a structural fact that must hold for every valid input (a
    non-interleaving trace, a certificate of a planned step, agreement of two
    independent criteria) turns out false.  It signals a bug, not bad input.
    """


def _pad(values: Sequence[int] | Mapping[int, int], size: int, what: str) -> tuple[int, ...]:
    if isinstance(values, Mapping):
        try:
            return (0,) + tuple(int(values[k]) for k in range(1, size + 1))
        except KeyError as exc:
            raise FatgraphError(f"{what} is not defined on sector {exc.args[0]}") from None
    values = tuple(int(v) for v in values)
    if len(values) == size + 1 and values[0] == 0:
        return values
    if len(values) != size:
        raise FatgraphError(f"{what} has {len(values)} entries, expected {size} (2n+1)")
    return (0,) + values


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of a padded permutation, each written from its smallest label."""
    seen = [False] * len(perm)
    out = []
    for start in range(1, len(perm)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


def count_cycles(perm: Sequence[int]) -> int:
    seen = bytearray(len(perm))
    count = 0
    for start in range(1, len(perm)):
        if seen[start]:
            continue
        count += 1
        x = start
        while not seen[x]:
            seen[x] = 1
            x = perm[x]
    return count


def standard_boundary(n: int) -> tuple[int, ...]:
    m = 2 * n + 1
    return (0,) + tuple(range(2, m + 1)) + (1,)


def parse_cycles(text: str, size: int) -> tuple[int, ...]:
    """Parse cycle notation such as ``"(1 5 3 7)(2 4 6)"`` into a padded permutation.

    Labels missing from the text are fixed points.  Commas are accepted as
    separators.
    """
    perm = [0] * (size + 1)
    seen = set()
    body = text.strip()
    if re.sub(r"\(\s*[\d\s,]*\)", "", body).strip():
        raise FatgraphError(f"malformed cycle notation: {text!r}")
    for group in re.findall(r"\(([^)]*)\)", body):
        labels = [int(tok) for tok in re.split(r"[\s,]+", group.strip()) if tok]
        for a, b in zip(labels, labels[1:] + labels[:1]):
            if not 1 <= a <= size:
                raise FatgraphError(f"sector {a} out of range 1..{size}")
            if a in seen:
                raise FatgraphError(f"sector {a} appears twice in {text!r}")
            seen.add(a)
            perm[a] = b
    for k in range(1, size + 1):
        if k not in seen:
            perm[k] = k
    return tuple(perm)


def format_cycles(perm: Sequence[int]) -> str:
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles_of(perm))


def parse_signs(text: str | Iterable) -> tuple[int, ...]:
    if isinstance(text, str):
        tokens = [t for t in re.split(r"[\s,]+", text.strip()) if t]
        if len(tokens) == 1 and len(tokens[0]) > 1 and set(tokens[0]) <= set("+-"):
            tokens = list(tokens[0])
    else:
        tokens = list(text)
    out = []
    for tok in tokens:
        if tok in ("+", "+1", 1, "1"):
            out.append(1)
        elif tok in ("-", "-1", -1):
            out.append(-1)
        else:
            raise FatgraphError(f"bad orientation token {tok!r}; expected + or -")
    return tuple(out)


def format_signs(omega: Sequence[int]) -> str:
    return " ".join("+" if s > 0 else "-" for s in omega[1:])


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _case1(x, y, s, g, w):
    sx, sy = s[x], s[y]
    return ((g[x] == sy or g[sy] == x) and (g[sx] == y or g[y] == sx)
            and w[x] == w[sy] and w[sx] == w[y])


def _case2(x, y, s, g, w):
    sx, sy = s[x], s[y]
    return ((g[x] == y or g[y] == x) and (g[sx] == sy or g[sy] == sx)
            and w[x] == -w[y] and w[sx] == -w[sy])


def _admissible(s, g, w, m):
    """Admissible partners of every wedge ``x -> s[x]``, ``x`` in ``1 .. m-1``."""
    partners = {x: [] for x in range(1, m)}
    for x in range(1, m):
        for y in range(x + 1, m):
            if _case1(x, y, s, g, w) or _case2(x, y, s, g, w):
                partners[x].append(y)
                partners[y].append(x)
    return partners


def _perfect_matchings(partners, limit=2):
    """Up to ``limit`` perfect matchings of the admissibility graph."""
    found = []
    order = sorted(partners, key=lambda x: (len(partners[x]), x))
    mate = {}

    def search():
        if len(found) >= limit:
            return
        x = next((x for x in order if x not in mate), None)
        if x is None:
            found.append(dict(mate))
            return
        for y in partners[x]:
            if y not in mate:
                mate[x], mate[y] = y, x
                search()
                del mate[x], mate[y]

    search()
    return found


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    partner: dict = field(default_factory=dict)
    cases: dict = field(default_factory=dict)
    violations: tuple = ()

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(f"{msg} (sectors {', '.join(map(str, secs))})" if secs else msg
                         for msg, secs in self.violations)


def validate(n: int, sigma, omega, gamma=None) -> ValidationReport:
    """Check the rooted-fatgraph axioms for ``(n, sigma, omega, gamma)``.

    Every wedge ``(x, sigma(x))`` with ``x != 2n+1`` must be matched to exactly
    one partner wedge, untwisted (case 1) or twisted (case 2), and the induced
    matching must be the unique perfect matching of the admissibility graph.
    """
    violations = []

    def fail(msg, *secs):
        violations.append((msg, tuple(secs)))
        return ValidationReport(False, violations=tuple(violations))

    if not isinstance(n, int) or n < 1:
        return fail(f"ribbon count must be a positive integer, got {n!r}")
    m = 2 * n + 1
    try:
        s = _pad(sigma, m, "sigma")
        w = _pad(omega, m, "omega")
        g = standard_boundary(n) if gamma is None else _pad(gamma, m, "gamma")
    except FatgraphError as exc:
        return fail(str(exc))
    for name, perm in (("sigma", s), ("gamma", g)):
        if sorted(perm[1:]) != list(range(1, m + 1)):
            return fail(f"{name} is not a bijection on 1..{m}")
    bad = [k for k in range(1, m + 1) if w[k] not in (1, -1)]
    if bad:
        return fail("omega must take values +1/-1", *bad)
    if s[m] != 1:
        violations.append((f"root: sigma({m}) = {s[m]}, expected 1", (m,)))
    if g[m] != 1:
        violations.append((f"root: gamma({m}) = {g[m]}, expected 1", (m,)))
    if w[1] != w[m]:
        violations.append((f"root: omega(1) != omega({m})", (1, m)))
    if violations:
        return ValidationReport(False, violations=tuple(violations))

    partners = _admissible(s, g, w, m)
    for x in range(1, m):
        if not partners[x]:
            violations.append((f"wedge ({x},{s[x]}) has no admissible partner", (x, s[x])))
    if violations:
        return ValidationReport(False, violations=tuple(violations))
    matchings = _perfect_matchings(partners)
    if not matchings:
        return fail("wedges admit no perfect matching into ribbons", *range(1, m))
    if len(matchings) > 1:
        a, b = matchings
        diff = sorted(x for x in a if a[x] != b[x])
        return fail("ambiguous matching: two distinct perfect matchings", *diff)
    mate = matchings[0]
    cases = {}
    for x, y in mate.items():
        c1, c2 = _case1(x, y, s, g, w), _case2(x, y, s, g, w)
        cases[x] = AMBIGUOUS if (c1 and c2) else (UNTWISTED if c1 else TWISTED)
    return ValidationReport(True, partner=mate, cases=cases)


# ---------------------------------------------------------------------------
# Fatgraph and ribbons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ribbon:
    wedge_a: tuple[int, int]
    wedge_b: tuple[int, int]
    twist: str
    direction: str
    origin: int
    terminus: int

    @property
    def sectors(self) -> frozenset:
        return frozenset(self.wedge_a + self.wedge_b)

    @property
    def half_edges(self) -> tuple[int, int]:
        """Half-edge ids: the sector each wedge points to."""
        return (self.wedge_a[1], self.wedge_b[1])

    @property
    def mono(self) -> bool:
        return self.direction == MONO

    def __str__(self):
        (a, b), (c, d) = self.wedge_a, self.wedge_b
        return f"(({a},{b}),({c},{d}))"


@dataclass(frozen=True, eq=True)
class Fatgraph:
    """An immutable rooted fatgraph.  Build with :func:`make_fatgraph`."""
    n: int
    sigma: tuple
    omega: tuple
    gamma: tuple | None = None

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    @property
    def boundary(self) -> tuple:
        return self.gamma if self.gamma is not None else standard_boundary(self.n)

    def vertices(self) -> list[tuple[int, ...]]:
        return cycles_of(self.sigma)

    def vertex_of(self, s: int) -> tuple[int, ...]:
        cyc = [s]
        x = self.sigma[s]
        while x != s:
            cyc.append(x)
            x = self.sigma[x]
        k = cyc.index(min(cyc))
        return tuple(cyc[k:] + cyc[:k])

    def vertex_id(self, s: int) -> int:
        return min(self.vertex_of(s))

    @property
    def unicellular(self) -> bool:
        return self.gamma is None or count_cycles(self.gamma) == 1

    def __str__(self):
        return f"n={self.n} sigma={format_cycles(self.sigma)} omega={format_signs(self.omega)}"


def make_fatgraph(n: int, sigma, omega, gamma=None) -> Fatgraph:
    """Validate and build a fatgraph; ``sigma``/``gamma`` may be cycle strings."""
    m = 2 * n + 1 if isinstance(n, int) else 0
    if isinstance(sigma, str):
        sigma = parse_cycles(sigma, m)
    if isinstance(omega, str):
        omega = parse_signs(omega)
    if isinstance(gamma, str):
        gamma = parse_cycles(gamma, m)
    report = validate(n, sigma, omega, gamma)
    if not report.ok:
        raise FatgraphError(f"invalid fatgraph:\n{report}")
    s, w = _pad(sigma, m, "sigma"), _pad(omega, m, "omega")
    g = None
    if gamma is not None:
        g = _pad(gamma, m, "gamma")
        if g == standard_boundary(n):
            g = None
    return Fatgraph(n, s, w, g)


def _require_unicellular(F: Fatgraph):
    if not F.unicellular:
        raise FatgraphError("operation requires a unicellular fatgraph")


_RIBBON_CACHE: dict = {}


def ribbons(F: Fatgraph) -> list[Ribbon]:
    """The ``n`` ribbons of ``F`` sorted by origin."""
    hit = _RIBBON_CACHE.get(F)
    if hit is not None:
        return list(hit)
    report = validate(F.n, F.sigma, F.omega, F.gamma)
    if not report.ok:
        raise FatgraphError(f"invalid fatgraph:\n{report}")
    s, w, g = F.sigma, F.omega, F.boundary
    m = F.size
    # rank of each sector along the boundary walk from sector 1
    rank = [0] * (m + 1)
    x, r = 1, 0
    while True:
        rank[x] = r
        r += 1
        x = g[x]
        if x == 1:
            break
    out = []
    for x, y in report.partner.items():
        if x > y:
            continue
        dx = w[x] == -w[s[x]]
        dy = w[y] == -w[s[y]]
        if dx != dy:
            raise InconsistencyError(f"wedges ({x},{s[x]}) and ({y},{s[y]}) disagree on direction")
        secs = {x, s[x], y, s[y]}
        if F.gamma is None:
            lo, hi = min(secs), max(secs)
        else:
            # only meaningful within one boundary cycle; used for reporting
            lo, hi = min(secs, key=rank.__getitem__), max(secs, key=rank.__getitem__)
        out.append(Ribbon((x, s[x]), (y, s[y]), report.cases[x], MONO if dx else BI, lo, hi))
    out.sort(key=lambda r: (r.origin, r.wedge_a))
    if len(_RIBBON_CACHE) > 50000:
        _RIBBON_CACHE.clear()
    _RIBBON_CACHE[F] = tuple(out)
    return out


def euler_genus(F: Fatgraph) -> int:
    """Euler genus ``2 - (v - e + b)``."""
    b = 1 if F.gamma is None else count_cycles(F.gamma)
    g = 2 - (count_cycles(F.sigma) - F.n + b)
    if g < 0:
        raise InconsistencyError(f"negative Euler genus for {F}")
    return g


def is_orientable(F: Fatgraph) -> bool:
    """A unicellular fatgraph is orientable iff it has no mono-directional ribbon."""
    _require_unicellular(F)
    return not any(r.mono for r in ribbons(F))


def crossing(F: Fatgraph, r1: Ribbon, r2: Ribbon) -> bool:
    _require_unicellular(F)
    if r1 == r2:
        raise FatgraphError("a ribbon does not cross itself")
    return ribbons_cross(r1, r2)


def ribbons_cross(r1: Ribbon, r2: Ribbon) -> bool:
    a, b, c, d = r1.origin, r1.terminus, r2.origin, r2.terminus
    return a < c < b < d or c < a < d < b


def flippable(F: Fatgraph, v: int) -> bool:
    """The root vertex can only be flipped when it consists of sectors 1 and 2n+1."""
    cyc = F.vertex_of(v)
    return 1 not in cyc or len(cyc) == 2


def flip_vertex(F: Fatgraph, v: int) -> Fatgraph:
    """Reverse the cyclic order of vertex ``v`` and negate its orientations.

    ``v`` is a vertex id, the smallest sector of the vertex.
    """
    if not 1 <= v <= F.size or F.vertex_id(v) != v:
        raise FatgraphError(f"unknown vertex id {v}")
    if not flippable(F, v):
        raise FatgraphError("flipping the root vertex would move the root wedge")
    s, w = list(F.sigma), list(F.omega)
    _flip_in_place(s, w, F.vertex_of(v))
    return Fatgraph(F.n, tuple(s), tuple(w), F.gamma)


def _flip_in_place(s, w, cyc):
    k = len(cyc)
    for idx, x in enumerate(cyc):
        s[x] = cyc[idx - 1] if k > 1 else x
        w[x] = -w[x]


def _vertex_choice(s, w, cyc):
    """Local encodings of a vertex in its current and flipped state."""
    m0 = cyc[0]
    fwd = [m0]
    x = s[m0]
    while x != m0:
        fwd.append(x)
        x = s[x]
    back = [m0] + fwd[:0:-1]
    enc_fwd = tuple(fwd) + tuple(w[x] for x in fwd)
    enc_back = tuple(back) + tuple(-w[x] for x in back)
    return enc_fwd, enc_back


def _flip_normal(F: Fatgraph) -> Fatgraph:
    s, w = list(F.sigma), list(F.omega)
    for cyc in cycles_of(F.sigma):
        if 1 in cyc:
            continue
        enc_fwd, enc_back = _vertex_choice(F.sigma, F.omega, cyc)
        if enc_back < enc_fwd:
            _flip_in_place(s, w, cyc)
    return Fatgraph(F.n, tuple(s), tuple(w), None)


def negate(F: Fatgraph) -> Fatgraph:
    """Reverse every sector orientation; describes the same fatgraph."""
    return Fatgraph(F.n, F.sigma, tuple(-x for x in F.omega), F.gamma)


def canonical_representative(F: Fatgraph) -> Fatgraph:
    """The representative of ``F`` up to vertex flips and global orientation reversal.

    Sector labels are pinned by the standard boundary and the root, so the
    only freedom is flipping non-root vertices and reading all orientations
    the other way round.  The root vertex is never flipped here, not even
    when it is ``(1 2n+1)``: that flip does not commute with reversals, so
    identifying across it would merge states at different distances.  Each
    non-root vertex is put in the state whose encoding (cycle from its
    smallest sector, then signs) is smaller; of the two global readings the
    one with the smaller encoding wins.
    """
    _require_unicellular(F)
    a, b = _flip_normal(F), _flip_normal(negate(F))
    return a if encode(a) <= encode(b) else b


def canonical_form(F: Fatgraph) -> bytes:
    return encode(canonical_representative(F))


def encode(F: Fatgraph) -> bytes:
    m = F.size
    return bytes([F.n]) + bytes(F.sigma[1:]) + bytes((1 if x > 0 else 0) for x in F.omega[1:]) \
        if m < 256 else repr((F.sigma, F.omega)).encode()


def induced_fatgraph(F: Fatgraph, component: Iterable[Ribbon]) -> Fatgraph:
    """The fatgraph induced by a crossing-equivalence class of ribbons.

    The class's sectors are relabeled in boundary order; the two ends of each
    gap merge into one sector and the outermost sector is bisected into the
    new root pair ``1`` and ``2m+1``.
    """
    _require_unicellular(F)
    comp = list(component)
    all_ribbons = ribbons(F)
    if not comp or any(r not in all_ribbons for r in comp):
        raise FatgraphError("not a set of ribbons of this fatgraph")
    if set(comp) != set(_class_of(all_ribbons, comp[0])):
        raise FatgraphError("ribbon set is not a component")
    w = F.omega
    m = 2 * len(comp) + 1
    sectors = sorted(set().union(*(r.sectors for r in comp)))
    label = {}
    nxt = 0
    prev = None
    for x in sectors:
        if prev is None or x != prev + 1:
            # a new run: its first sector merges with the end of the previous run
            if prev is None:
                nxt += 1
                label[x] = nxt
            else:
                label[x] = label[prev]
                if w[x] != w[prev]:
                    raise InconsistencyError(f"gap ends {prev} and {x} disagree in orientation")
        else:
            nxt += 1
            label[x] = nxt
        prev = x
    first, last = sectors[0], sectors[-1]
    if nxt != m or label[last] != m:
        raise InconsistencyError(f"induced relabeling produced {nxt} sectors, expected {m}")
    sig = [0] * (m + 1)
    om = [0] * (m + 1)
    for r in comp:
        for x, y in (r.wedge_a, r.wedge_b):
            a = label[x]
            if sig[a]:
                raise InconsistencyError(f"two wedges leave induced sector {a}")
            sig[a] = label[y]
            om[a] = w[x]
            om[label[y]] = w[y]
    om[1], om[m] = w[first], w[last]
    if sig[m] == 0:
        sig[m] = 1
    elif sig[1] == 0:
        # the outermost corner is traversed against the vertex order: re-root by flipping
        sig[1] = m
        cyc = cycles_of(sig)
        root = next(c for c in cyc if 1 in c)
        _flip_in_place(sig, om, root)
    else:
        raise InconsistencyError("induced fatgraph has no free root wedge")
    report = validate(len(comp), tuple(sig), tuple(om))
    if not report.ok:
        raise InconsistencyError(f"induced fatgraph is invalid:\n{report}")
    return Fatgraph(len(comp), tuple(sig), tuple(om), None)


def _class_of(all_ribbons, seed):
    seen = {seed}
    todo = [seed]
    while todo:
        r = todo.pop()
        for q in all_ribbons:
            if q not in seen and ribbons_cross(r, q):
                seen.add(q)
                todo.append(q)
    return seen
