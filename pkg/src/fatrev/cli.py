"""Command-line interface.

Exit status: 0 on success, 1 for invalid input, 2 when an internal
consistency check fails.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .core import FatgraphError, InconsistencyError, euler_genus, validate
from .decomposition import decompose
from .formats import emit_fatg, emit_script, info, parse_document, parse_fatg, parse_script, to_dot
from .oracle import StateBoundExceeded, bfs_distance, random_fatgraph
from .planner import execute, plan, r_distance

OK, DOMAIN_ERROR, INCONSISTENT = 0, 1, 2


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FatgraphError(f"cannot read {path}: {exc.strerror}") from None


def _load(path):
    return parse_fatg(_read(path))


def _write(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    doc = parse_document(_read(args.file))
    report = validate(doc["n"], doc["sigma"], doc["omega"], doc["gamma"])
    if not report.ok:
        print(f"{args.file}: invalid", file=sys.stderr)
        print(report, file=sys.stderr)
        return DOMAIN_ERROR
    print(f"{args.file}: ok")
    return OK


def cmd_info(args):
    data = info(_load(args.file))
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    return OK


def cmd_components(args):
    F = _load(args.file)
    D = decompose(F)
    for c in D.components:
        kind = "trivial" if c.trivial else ("orientable" if c.orientable else "non-orientable")
        print(f"{c} {kind} genus={c.genus} ribbons={len(c.ribbons)}")
    if args.dot:
        Path(args.dot).write_text(to_dot(D.tree, "components"))
    return OK


def cmd_blocks(args):
    F = _load(args.file)
    D = decompose(F)
    B = D.block_tree
    for k in B.block_keys:
        b = B.blocks[k]
        tags = ["orientable" if b.orientable else "non-orientable"]
        if k in D.exposed:
            tags.append("exposed")
        if k in D.super_blocks:
            tags.append("super")
        print(f"{b} start={b.start} {' '.join(tags)}")
    if args.dot:
        Path(args.dot).write_text(to_dot(B, "blocks"))
    return OK


def cmd_distance(args):
    print(r_distance(_load(args.file)))
    return OK


def cmd_plan(args):
    p = plan(_load(args.file))
    _write(emit_script(p), args.output)
    return OK


def cmd_apply(args):
    F = _load(args.file)
    moves = parse_script(_read(args.script))
    run = execute(F, moves)
    _write(emit_fatg(run.final), args.output)
    last = run.trace[-1]
    print(f"{len(moves)} steps, genus {last.genus}", file=sys.stderr)
    return OK


def cmd_oracle(args):
    F = _load(args.file)
    report = bfs_distance(F, state_bound=args.max_states)
    print(report.distance)
    print(f"states {report.states}; script: " + "; ".join(map(str, report.moves)), file=sys.stderr)
    return OK


def cmd_gen(args):
    F = random_fatgraph(args.ribbons, args.genus, args.seed)
    _write(emit_fatg(F, f"random: {args.ribbons} ribbons, genus {args.genus}, seed {args.seed}"), args.output)
    return OK


def cmd_fuzz(args):
    rng = random.Random(args.seed)
    bad = 0
    for k in range(args.count):
        seed = rng.randrange(2**32)
        g = rng.randint(0, args.ribbons)
        F = random_fatgraph(args.ribbons, g, seed)
        d = r_distance(F)
        p = plan(F)
        final = execute(F, p).final
        line = f"sample {k}: seed={seed} genus={g} formula={d} plan={len(p)}"
        ok = len(p) == d and euler_genus(final) == 0
        if not args.no_bfs:
            try:
                b = bfs_distance(F, state_bound=args.max_states).distance
                line += f" bfs={b}"
                ok = ok and b == d
            except StateBoundExceeded:
                line += " bfs=skipped"
        print(line + ("" if ok else "  MISMATCH"))
        bad += not ok
    if bad:
        print(f"{bad} of {args.count} samples disagree", file=sys.stderr)
        return INCONSISTENT
    return OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage mistakes are input errors; status 2 is reserved for inconsistencies
        self.print_usage(sys.stderr)
        self.exit(DOMAIN_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fatrev", description="Reversal distance of unicellular fatgraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .fatg file")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("info", help="summary numbers")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_info)

    for name, fn, what in (("components", cmd_components, "component"), ("blocks", cmd_blocks, "block")):
        p = sub.add_parser(name, help=f"list {what}s")
        p.add_argument("file")
        p.add_argument("--dot", metavar="OUT", help=f"write the {what} tree as DOT")
        p.set_defaults(run=fn)

    p = sub.add_parser("distance", help="reversal distance from the formula")
    p.add_argument("file")
    p.set_defaults(run=cmd_distance)

    p = sub.add_parser("plan", help="optimal reversal script")
    p.add_argument("file")
    p.add_argument("-o", "--output", metavar="SCRIPT")
    p.set_defaults(run=cmd_plan)

    p = sub.add_parser("apply", help="apply a reversal script")
    p.add_argument("file")
    p.add_argument("script")
    p.add_argument("-o", "--output", metavar="OUT")
    p.set_defaults(run=cmd_apply)

    p = sub.add_parser("oracle", help="reversal distance by breadth-first search")
    p.add_argument("file")
    p.add_argument("--max-states", type=int, default=200_000)
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("gen", help="random fatgraph")
    p.add_argument("--ribbons", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", metavar="OUT")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("fuzz", help="compare formula, planner and search on random fatgraphs")
    p.add_argument("--ribbons", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-states", type=int, default=50_000)
    p.add_argument("--no-bfs", action="store_true", help="skip the search")
    p.set_defaults(run=cmd_fuzz)
    return ap


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return INCONSISTENT
    except (FatgraphError, StateBoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


def main():
    sys.exit(cli_main())
