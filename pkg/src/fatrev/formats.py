"""Text formats: ``.fatg`` fatgraph files, reversal scripts, DOT trees and JSON summaries.

A ``.fatg`` file::

    fatgraph 1
    n 2
    sigma (1 3 5)(2 4)
    omega + - - + +
    # gamma (...)   optional, only for fixtures with several boundary cycles

A script has one reversal per line: ``glue i j``, ``slice i j`` or
``halfflip i j``.  Both formats accept ``#`` comments and blank lines.
"""
from __future__ import annotations

import json
import re

from .core import (
    Fatgraph,
    FatgraphError,
    count_cycles,
    euler_genus,
    format_cycles,
    format_signs,
    is_orientable,
    make_fatgraph,
    parse_cycles,
    parse_signs,
    validate,
)
from .reversals import SCRIPT_WORDS, Reversal

FORMAT_VERSION = 1
_DIRECTIVES = ("fatgraph", "n", "sigma", "omega", "gamma")
_KIND_OF_WORD = {w: k for k, w in SCRIPT_WORDS.items()}


class FormatError(FatgraphError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}" + (f", column {col}" if col else "") + ": " if line else ""
        super().__init__(where + message)


def _lines(text):
    """Yield ``(line number, column of the value, directive, value)``."""
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        m = re.match(r"\s*(\S+)\s*", body)
        yield no, m.end() + 1, m.group(1), body[m.end():], m.start(1) + 1


def parse_document(text: str) -> dict:
    """Split a ``.fatg`` text into its fields without validating the fatgraph."""
    fields = {}
    where = {}
    for no, col, word, value, wcol in _lines(text):
        if word not in _DIRECTIVES:
            raise FormatError(f"unknown directive {word!r}", no, wcol)
        if word in fields:
            raise FormatError(f"directive {word!r} given twice", no, wcol)
        if not value.strip():
            raise FormatError(f"directive {word!r} needs a value", no, col)
        fields[word] = value.strip()
        where[word] = (no, col)
    for word in ("fatgraph", "n", "sigma", "omega"):
        if word not in fields:
            raise FormatError(f"missing directive {word!r}")
    if fields["fatgraph"] != str(FORMAT_VERSION):
        raise FormatError(f"unsupported format version {fields['fatgraph']!r}", *where["fatgraph"])
    try:
        n = int(fields["n"])
    except ValueError:
        raise FormatError(f"ribbon count must be an integer, got {fields['n']!r}", *where["n"]) from None
    if n < 1:
        raise FormatError(f"ribbon count must be positive, got {n}", *where["n"])
    m = 2 * n + 1
    doc = {"n": n}
    for word in ("sigma", "gamma"):
        if word in fields:
            try:
                doc[word] = parse_cycles(fields[word], m)
            except (FatgraphError, ValueError) as exc:
                raise FormatError(str(exc), *where[word]) from None
    try:
        omega = parse_signs(fields["omega"])
    except FatgraphError as exc:
        raise FormatError(str(exc), *where["omega"]) from None
    if len(omega) != m:
        raise FormatError(f"omega has {len(omega)} entries, expected 2n+1 = {m}", *where["omega"])
    doc["omega"] = (0,) + omega
    doc.setdefault("gamma", None)
    return doc


def parse_fatg(text: str) -> Fatgraph:
    doc = parse_document(text)
    report = validate(doc["n"], doc["sigma"], doc["omega"], doc["gamma"])
    if not report.ok:
        raise FatgraphError(f"invalid fatgraph:\n{report}")
    return make_fatgraph(doc["n"], doc["sigma"], doc["omega"], doc["gamma"])


def emit_fatg(F: Fatgraph, comment: str | None = None) -> str:
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out += [f"fatgraph {FORMAT_VERSION}", f"n {F.n}", f"sigma {format_cycles(F.sigma)}",
            f"omega {format_signs(F.omega)}"]
    if F.gamma is not None:
        out.append(f"gamma {format_cycles(F.gamma)}")
    return "\n".join(out) + "\n"


def parse_script(text: str) -> list[Reversal]:
    moves = []
    for no, col, word, value, wcol in _lines(text):
        if word not in _KIND_OF_WORD:
            raise FormatError(f"unknown reversal {word!r}; expected glue, slice or halfflip", no, wcol)
        toks = value.split()
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise FormatError(f"{word} takes two sector numbers, got {value.strip()!r}", no, col)
        i, j = map(int, toks)
        if i >= j:
            raise FormatError(f"sectors must satisfy i < j, got {i} {j}", no, col)
        moves.append(Reversal(i, j, _KIND_OF_WORD[word]))
    return moves


def emit_script(steps) -> str:
    """Script text for a plan or a list of reversals."""
    lines = []
    for s in steps:
        move = getattr(s, "move", s)
        lines.append(str(move))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------

def _node_name(v):
    kind, what = v
    if kind == "W":
        return f"W_{what[0]}_{what[1]}"
    return f"{kind}{what}"


def to_dot(tree, name: str = "tree") -> str:
    """Render a component or block tree; black vertices filled, gaps hollow."""
    lines = [f"graph {name} {{", "  node [fontname=Helvetica];"]
    comps = getattr(tree, "components", None)
    blocks = getattr(tree, "blocks", None)
    for v in tree.nodes:
        kind, what = v
        if kind == "W":
            label = f"[{what[0]},{what[1]}]"
            style = "shape=circle, style=solid, fillcolor=white"
        else:
            if kind == "B" and blocks is not None:
                b = blocks[v]
                label = f"B{what} " + ("orientable" if b.orientable else "non-orientable")
            elif comps is not None and kind == "C" and what < len(comps):
                c = comps[what]
                label = str(c) + (" trivial" if c.trivial else "" if c.orientable else " non-orientable")
            else:
                label = f"{kind}{what}"
            style = "shape=box, style=filled, fillcolor=black, fontcolor=white"
        lines.append(f'  {_node_name(v)} [label="{label}", {style}];')
    for p, v in tree.edges():
        lines.append(f"  {_node_name(p)} -- {_node_name(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON summary
# ---------------------------------------------------------------------------

def info(F: Fatgraph) -> dict:
    from .decomposition import decompose
    from .planner import r_distance

    out = {
        "v": count_cycles(F.sigma),
        "e": F.n,
        "b": 1 if F.gamma is None else count_cycles(F.gamma),
        "genus": euler_genus(F),
    }
    if not F.unicellular:
        keys = ("orientable", "components", "trivial_components", "blocks", "orientable_blocks",
                "e_blocks", "s_blocks", "distance")
        out.update(dict.fromkeys(keys))
        return out
    D = decompose(F)
    B = D.block_tree
    out.update({
        "orientable": is_orientable(F),
        "components": len(D.components),
        "trivial_components": sum(c.trivial for c in D.components),
        "blocks": len(B.blocks),
        "orientable_blocks": len(B.orientable_blocks()),
        "e_blocks": D.h,
        "s_blocks": len(D.super_blocks),
        "distance": r_distance(F),
    })
    return out


def info_json(F: Fatgraph) -> str:
    return json.dumps(info(F), indent=2)
