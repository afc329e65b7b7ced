"""Gluing, slicing and half-flipping of unicellular fatgraphs.

Every ``i, j``-reversal with ``i < j`` reverses the boundary segment
``i+1 .. j-1``.  Results are relabeled at once by ``rho(k) = i + j - k`` on that
segment so the boundary is again the standard cycle.

Sector ``2n+1`` is never used as a reversal sector: cutting at the root wedge
would move the root.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Fatgraph,
    FatgraphError,
    InconsistencyError,
    Ribbon,
    _flip_in_place,
    _require_unicellular,
    flippable,
    validate,
)

GLUING = "gluing"
SLICING = "slicing"
HALF_FLIPPING = "half-flipping"

SCRIPT_WORDS = {GLUING: "glue", SLICING: "slice", HALF_FLIPPING: "halfflip"}


@dataclass(frozen=True, order=True)
class Reversal:
    i: int
    j: int
    kind: str

    def __str__(self):
        return f"{SCRIPT_WORDS[self.kind]} {self.i} {self.j}"


def _check_pair(F: Fatgraph, i: int, j: int):
    _require_unicellular(F)
    if i == j:
        raise FatgraphError("reversal sectors must differ")
    if not (1 <= i < j <= 2 * F.n):
        raise FatgraphError(f"reversal sectors must satisfy 1 <= i < j <= {2 * F.n}, got ({i}, {j})")


def _same_vertex(sigma, i, j):
    x = sigma[i]
    while x != i:
        if x == j:
            return True
        x = sigma[x]
    return False


def classify_reversal(F: Fatgraph, i: int, j: int) -> str:
    _check_pair(F, i, j)
    return _kind(F.sigma, F.omega, i, j)


def _kind(sigma, omega, i, j):
    if not _same_vertex(sigma, i, j):
        return GLUING
    return SLICING if omega[i] == -omega[j] else HALF_FLIPPING


def _normalize(F: Fatgraph, s, w, i, j, track):
    """Relabel by ``rho`` and negate the orientation of the reversed segment."""
    m = F.size
    rho = list(range(m + 1))
    for k in range(i + 1, j):
        rho[k] = i + j - k
    s2 = [0] * (m + 1)
    w2 = [0] * (m + 1)
    for k in range(1, m + 1):
        s2[rho[k]] = rho[s[k]]
        w2[rho[k]] = -w[k] if i < k < j else w[k]
    if track is not None:
        for h in track:
            track[h] = rho[track[h]]
    return Fatgraph(F.n, tuple(s2), tuple(w2), None)


def _swap_labels(s, w, i, j, track):
    """Exchange the names of corners ``i`` and ``j``."""
    sw = {i: j, j: i}
    s2 = list(s)
    for x in range(1, len(s)):
        s2[sw.get(x, x)] = sw.get(s[x], s[x])
    w[i], w[j] = w[j], w[i]
    if track is not None:
        for h, e in track.items():
            track[h] = sw.get(e, e)
    return s2


def _glue_or_slice(F, i, j, track):
    s, w = list(F.sigma), list(F.omega)
    if w[i] == w[j]:
        # distinct vertices only: make the orientations differ by a flip
        cyc = F.vertex_of(j) if flippable(F, j) else F.vertex_of(i)
        if track is not None and not (1 in cyc and len(cyc) == 2):
            inv = {s[x]: x for x in cyc}
            for h, e in track.items():
                if e in inv:
                    track[h] = inv[e]
        _flip_in_place(s, w, cyc)
    if w[i] == w[1]:
        # the boundary passes corner i along the vertex order
        s[i], s[j] = s[j], s[i]
    else:
        # it passes i against the vertex order, so the two new corners trade names
        sw = {i: j, j: i}
        s = [sw.get(y, y) for y in s]
        if track is not None:
            for h, e in track.items():
                track[h] = sw.get(e, e)
    return _normalize(F, s, w, i, j, track)


def _arc(s, a, b):
    """Corners strictly between ``a`` and ``b`` walking the vertex order from ``a``."""
    out = []
    x = s[a]
    while x != b:
        out.append(x)
        x = s[x]
    return out


def _half_flip(F, i, j, track):
    s, w = list(F.sigma), list(F.omega)
    a, b = i, j
    part = _arc(s, i, j)
    if 1 in part:
        # flipping this arc would carry the root wedge; flip the other arc instead
        a, b = j, i
        part = _arc(s, j, i)
    half = [b] + part
    if track is not None:
        prev = {half[k]: half[k - 1] for k in range(len(half))}
        for h, e in track.items():
            if e in prev:
                track[h] = prev[e]
    if part:
        s[a] = part[-1]
        for k in range(len(part) - 1, 0, -1):
            s[part[k]] = part[k - 1]
        s[part[0]] = b
    for x in part:
        w[x] = -w[x]
    if (w[i] != w[1]) != (a == j):
        s = _swap_labels(s, w, i, j, track)
        w[i], w[j] = -w[i], -w[j]
    return _normalize(F, s, w, i, j, track)


def apply_reversal(F: Fatgraph, i: int, j: int, kind: str | None = None,
                   track: dict | None = None) -> Fatgraph:
    """Apply the ``i, j``-reversal of whatever kind the configuration dictates.

    If ``kind`` is given it must match :func:`classify_reversal`.  ``track``
    maps half-edge ids to their current id (the sector a wedge points to) and
    is updated in place, which realizes the natural ribbon bijection.
    """
    _check_pair(F, i, j)
    actual = _kind(F.sigma, F.omega, i, j)
    if kind is not None and kind != actual:
        raise FatgraphError(f"({i}, {j}) is a {actual}, not a {kind}")
    if actual == HALF_FLIPPING:
        return _half_flip(F, i, j, track)
    return _glue_or_slice(F, i, j, track)


def apply(F: Fatgraph, move: Reversal, track: dict | None = None) -> Fatgraph:
    return apply_reversal(F, move.i, move.j, move.kind, track)


def glue(F: Fatgraph, i: int, j: int) -> Fatgraph:
    return apply_reversal(F, i, j, GLUING)


def slice(F: Fatgraph, i: int, j: int) -> Fatgraph:  # noqa: A001 - the operation's name
    return apply_reversal(F, i, j, SLICING)


def half_flip(F: Fatgraph, i: int, j: int) -> Fatgraph:
    return apply_reversal(F, i, j, HALF_FLIPPING)


def m_ribbon_slice_pair(F: Fatgraph, r: Ribbon) -> tuple[int, int]:
    """Sectors at which slicing the m-ribbon ``r`` is performed."""
    if not r.mono:
        raise FatgraphError(f"ribbon {r} is bi-directional")
    if len(r.sectors) < 3:
        raise FatgraphError(f"ribbon {r} has fewer than 3 distinct sectors")
    if r.terminus != F.size:
        return r.origin + 1, r.terminus
    return r.origin, r.terminus - 1


def slice_m_ribbon(F: Fatgraph, r: Ribbon) -> Fatgraph:
    """Slice the m-ribbon ``r`` so that it becomes a trivial component."""
    i, j = m_ribbon_slice_pair(F, r)
    if _kind(F.sigma, F.omega, i, j) != SLICING:
        raise InconsistencyError(f"m-ribbon {r}: sectors ({i}, {j}) do not admit a slicing")
    return apply_reversal(F, i, j, SLICING)


def legal_reversals(F: Fatgraph) -> list[Reversal]:
    _require_unicellular(F)
    s, w = F.sigma, F.omega
    top = 2 * F.n
    return [Reversal(i, j, _kind(s, w, i, j)) for i in range(1, top) for j in range(i + 1, top + 1)]


def successors(F: Fatgraph):
    """Yield ``(move, result)`` for every legal reversal; no validation, for search."""
    for move in legal_reversals(F):
        yield move, apply_reversal(F, move.i, move.j)


def checked_apply(F: Fatgraph, move: Reversal) -> Fatgraph:
    """Apply ``move`` and assert the result satisfies the fatgraph axioms."""
    G = apply(F, move)
    report = validate(G.n, G.sigma, G.omega)
    if not report.ok:
        raise InconsistencyError(f"{move} on {F} produced an invalid fatgraph:\n{report}")
    return G


def half_edge_track(F: Fatgraph) -> dict:
    return {F.sigma[x]: F.sigma[x] for x in range(1, F.size)}
