"""``mwkit`` command line.

Exit codes: 0 success or verified, 2 a counterexample/refutation was computed,
1 bad input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from mwkit import coloring, extraction, flips
from mwkit.certificates import emit_certificate
from mwkit.errors import MwkitError
from mwkit.graph import generate, parse_graph, serialize_graph
from mwkit.mergeseq import (
    check_sync,
    is_structurally_bounded,
    minimize,
    parse_mseq,
    restrict,
    serialize_mseq,
    trivial_sequence,
    validate,
    width,
)
from mwkit.solver import DEFAULT_BUDGET, exact_merge_width

OK, REFUTED, INPUT_ERROR = 0, 2, 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _csv_ids(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertex ids, got {text!r}") from None
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("vertex ids start at 1")
    return [v - 1 for v in vals]


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for item in filter(None, (x.strip() for x in text.split(","))):
        a, sep, b = item.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected block pairs like 1:2, got {item!r}")
        out.append((int(a) - 1, int(b) - 1))
    return out


FLAGS = {
    "graph": dict(metavar="PATH", help="graph file (p edge format)"),
    "seq": dict(metavar="PATH", help="merge sequence file (.mseq)"),
    "radius": dict(type=int, metavar="R"),
    "budget": dict(type=int, default=DEFAULT_BUDGET, metavar="N", help="search node cap"),
    "k": dict(type=int, metavar="K"),
    "p": dict(type=int, metavar="P"),
    "alpha": dict(type=int, metavar="A"),
    "trials": dict(type=int, metavar="T"),
    "seed": dict(type=int, metavar="S"),
    "family": dict(metavar="NAME"),
    "params": dict(metavar="CSV", help="family parameters, e.g. 3,3 or 20,0.3"),
    "set": dict(type=_csv_ids, metavar="CSV", help="vertex ids (1-indexed)"),
    "x": dict(type=_csv_ids, metavar="CSV"),
    "y": dict(type=_csv_ids, metavar="CSV"),
    "u": dict(type=_csv_ids, metavar="CSV", help="candidate hideout (1-indexed)"),
    "d": dict(type=int, metavar="D"),
    "blocks": dict(type=_csv_ids, metavar="CSV", help="block id per vertex (1-indexed blocks)"),
    "pairs": dict(type=_pairs, default=[], metavar="CSV", help="flipped block pairs, e.g. 1:2,2:2"),
    "verify": dict(action="store_true", help="brute-force every k-flip"),
}

COMMANDS = {
    "validate": (["graph", "seq"], "check a merge sequence against a graph"),
    "width": (["seq", "radius", "graph"], "radius-r width of a sequence"),
    "minimize": (["graph", "seq"], "inclusion-minimal resolved sets"),
    "solve": (["graph", "radius", "budget"], "exact merge-width with a witness"),
    "restrict": (["graph", "seq", "set"], "restrict a sequence to an induced subgraph"),
    "trivial-seq": (["graph"], "two-step sequence resolving the smaller pair class"),
    "color": (["graph", "seq"], "colouring with the (t+1)! k^(2t-2) bound"),
    "color-sb": (["graph", "seq"], "colouring from a structurally bounded sequence"),
    "eh": (["graph", "seq"], "complete or anti-complete pair certificate"),
    "nc": (["graph", "p", "trials", "seed"], "neighbourhood complexity, exact or sampled"),
    "nc-witness": (["graph", "x", "y", "alpha", "k"], "dense trace witness or merge-width bound"),
    "hideout": (["graph", "k", "x", "y", "u", "radius", "d", "verify"], "hideout certificate or check"),
    "flip": (["graph", "blocks", "pairs"], "apply a k-flip"),
    "gen": (["family", "params", "seed"], "generate a graph"),
    "sync-check": (["graph", "seq"], "check that jointly unresolved pairs resolve together"),
}

REQUIRED = {
    "validate": {"graph", "seq"},
    "width": {"seq", "radius"},
    "minimize": {"graph", "seq"},
    "solve": {"graph", "radius"},
    "restrict": {"graph", "seq", "set"},
    "trivial-seq": {"graph"},
    "color": {"graph", "seq"},
    "color-sb": {"graph", "seq"},
    "eh": {"graph", "seq"},
    "nc": {"graph", "p"},
    "nc-witness": {"graph", "x", "y"},
    "hideout": {"graph", "k"},
    "flip": {"graph", "blocks"},
    "gen": {"family", "params"},
    "sync-check": {"graph", "seq"},
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mwkit", description="merge sequences and merge-width certificates")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (flags, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        for flag in flags + ["out"]:
            if flag == "out":
                p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
            else:
                p.add_argument(f"--{flag}", required=flag in REQUIRED[name], **FLAGS[flag])
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _graph(args):
    return parse_graph(_read(args.graph))


def _seq(args):
    return parse_mseq(_read(args.seq))


def _params(text: str) -> list:
    out = []
    for item in filter(None, (x.strip() for x in text.split(","))):
        try:
            out.append(int(item))
        except ValueError:
            out.append(Fraction(item))
    return out


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; returns (exit code, machine output)."""
    return _execute(build_parser().parse_args(argv))


def _execute(args: argparse.Namespace) -> tuple[int, str]:
    cmd = args.command
    out: list[str] = []

    if cmd == "gen":
        g = generate(args.family, _params(args.params), args.seed)
        return OK, serialize_graph(g)

    if cmd == "width":
        s = _seq(args)
        if args.graph is not None:
            bad = validate(parse_graph(_read(args.graph)), s)
            if bad is not None:
                return REFUTED, "\n".join(bad.lines()) + "\n"
        return OK, f"width {width(s, args.radius)}\n"

    g = _graph(args)

    if cmd == "validate":
        bad = validate(g, _seq(args))
        if bad is None:
            return OK, "ok\n"
        return REFUTED, "\n".join(bad.lines()) + "\n"
    if cmd == "sync-check":
        bad = check_sync(g, _seq(args))
        if bad is None:
            return OK, "ok\n"
        return REFUTED, "\n".join(bad.lines()) + "\n"
    if cmd == "minimize":
        return OK, serialize_mseq(minimize(g, _seq(args)))
    if cmd == "trivial-seq":
        return OK, serialize_mseq(trivial_sequence(g))
    if cmd == "restrict":
        s, mapping = restrict(g, _seq(args), args.set)
        comments = [f"map {old + 1} {new + 1}" for old, new in sorted(mapping.items())]
        return OK, serialize_mseq(s, comments)
    if cmd == "solve":
        res = exact_merge_width(g, args.radius, args.budget)
        if res.optimal:
            out.append(f"mw {res.optimum}")
        else:
            out += [f"mw-upper {res.optimum}", f"mw-lower {res.lower_bound}", "c search budget exhausted"]
        return OK, "\n".join(out) + "\n" + serialize_mseq(res.witness)
    if cmd in ("color", "color-sb"):
        s = _seq(args)
        if cmd == "color-sb":
            bad = is_structurally_bounded(g, s)
            if bad is not None:
                return REFUTED, "\n".join(bad.lines()) + "\n"
            col = coloring.color_structural(g, s)
        else:
            col = coloring.color_bounded_mw(g, s)
        return OK, emit_certificate(col)
    if cmd == "eh":
        return OK, emit_certificate(extraction.eh_pair(g, _seq(args)))
    if cmd == "nc":
        if args.trials is not None:
            res = extraction.nc_sample(g, args.p, args.trials, 0 if args.seed is None else args.seed)
            return OK, f"c sampled lower bound, p={args.p}\n" + emit_certificate(res)
        return OK, f"c exact, p={args.p}\n" + emit_certificate(extraction.nc_exact(g, args.p))
    if cmd == "nc-witness":
        if (args.alpha is None) == (args.k is None):
            raise UsageError("give exactly one of --alpha and --k")
        if args.k is not None:
            ref = extraction.mw2_lower_bound_from_nc(g, args.k, args.x, args.y)
            if ref is None:
                return REFUTED, "inconclusive\n"
            return OK, emit_certificate(ref)
        return OK, emit_certificate(extraction.nc_witness_minimize(g, args.x, args.y, args.alpha))
    if cmd == "hideout":
        if args.y is not None:
            if args.x is None:
                raise UsageError("--y needs --x")
            w = extraction.nc_witness_minimize(g, args.x, args.y, 2 ** (2 * args.k + 1))
            cert = flips.hideout_from_witness(g, args.k, w)
        else:
            if args.u is None or args.radius is None or args.d is None:
                raise UsageError("give --x/--y, or --u with --radius and --d")
            cert = flips.HideoutCertificate(tuple(sorted(set(args.u))), args.radius, args.k, args.d)
        if args.verify or args.y is None:
            cert, bad = flips.verify_hideout(g, cert)
            if bad is not None:
                lines = ["violating-flip"]
                lines += [f"block {' '.join(str(v + 1) for v in b)}" for b in bad.blocks]
                lines += [f"flip {p + 1} {q + 1}" for p, q in bad.flipped_pairs()]
                return REFUTED, "\n".join(lines) + "\n"
        return OK, emit_certificate(cert)
    if cmd == "flip":
        if len(args.blocks) != g.n:
            raise UsageError(f"--blocks needs one entry per vertex ({g.n})")
        nblocks = max(args.blocks) + 1
        blocks = [[v for v in range(g.n) if args.blocks[v] == b] for b in range(nblocks)]
        if not all(blocks):
            raise UsageError("block ids must be contiguous from 1")
        f = flips.KFlip.from_pairs(blocks, args.pairs)
        return OK, serialize_graph(flips.apply_flip(g, f))
    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        code, text = _execute(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return code
    except (UsageError, MwkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
