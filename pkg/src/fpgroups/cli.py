"""Command line front end.

Exit status: 0 on success, 1 when an enumeration overflows or a limit stops
the run, 2 for usage and parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import abelian, pipeline, session
from .coset_enum import DEFAULT_MAX_COSETS, enumerate_cosets, format_table
from .schreier import format_subgroup_presentation, subgroup_presentation
from .tietze import SimplifyParams, format_trace, simplify
from .words import ParseError, Presentation, format_presentation, parse_presentation, parse_words

OK, LIMIT, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _exponents(text: str) -> list[int]:
    """``2..6`` or ``2,3,5``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad exponent list {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("presentation", help="presentation file, or the text itself if it starts with '<'")
    common.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS, metavar="N")
    common.add_argument("--strategy", choices=["hlt", "felsch"], default="hlt")
    common.add_argument("--session", metavar="DIR", help="store artifacts and a manifest in DIR")
    common.add_argument("--mod", type=int, action="append", default=[], metavar="M",
                        help="also report invariants modulo the prime power M (repeatable)")
    common.add_argument("--figures", action="store_true",
                        help="render PNG figures into the session directory (or the current one)")
    common.add_argument("--quiet", action="store_true", help="suppress the report on stdout")

    words = argparse.ArgumentParser(add_help=False)
    words.add_argument("--subgroup", default="", metavar="WORDS", help="comma-separated subgroup generators")
    words.add_argument("--extra", default="", metavar="WORDS", help="comma-separated relators added to the presentation")

    ap = argparse.ArgumentParser(prog="fpgroups", description="Finitely presented group toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("parse", parents=[common], help="normalize a presentation")
    a = sub.add_parser("abelian", parents=[common], help="abelian invariants of the group")
    a.add_argument("--bound", action="store_true", help="also report the determinant torsion bound")
    sub.add_parser("enum", parents=[common, words], help="coset enumeration")
    sub.add_parser("rs", parents=[common, words], help="Reidemeister-Schreier subgroup presentation")
    s = sub.add_parser("simplify", parents=[common], help="Tietze simplification")
    s.add_argument("--protect", default="", metavar="NAMES", help="comma-separated generators to keep")
    s.add_argument("--max-length-factor", type=float, default=5)
    s.add_argument("--max-passes", type=int, default=20)
    sub.add_parser("derived", parents=[common], help="follow the derived series")
    sc = sub.add_parser("scan", parents=[common], help="enumerate quotients by added powers")
    sc.add_argument("--words", default=None, metavar="WORDS",
                    help="candidate words (default: products and commutators of generator pairs)")
    sc.add_argument("--exponents", type=_exponents, default=list(range(2, 7)), metavar="LIST")
    sc.add_argument("--extra", default="", metavar="WORDS", help="relators added to every candidate")
    p = sub.add_parser("preimage", parents=[common, words], help="presentation of a preimage or kernel")
    p.add_argument("--bound", action="store_true", help="also report the determinant torsion bound")
    p.add_argument("--no-simplify", action="store_true")
    return ap


class _Run:
    """Bookkeeping for one invocation: report lines, artifacts, figures."""

    def __init__(self, args, argv: list[str]):
        self.args = args
        self.lines: list[str] = []
        self.session = session.Session(args.session) if args.session else None
        src = args.presentation
        if src.lstrip().startswith("<"):
            self.text = src
            self.inputs = {"presentation": src}
        else:
            path = Path(src)
            if not path.is_file():
                raise UsageError(f"no such presentation file: {src}")
            self.text = path.read_text(encoding="utf-8")
            self.inputs = {f"{path.resolve()}.sha256": session.file_digest(path)}
        # argv as recorded: absolute file path, no session or output switches
        rec = []
        skip = False
        for tok in argv:
            if skip:
                skip = False
                continue
            if tok == "--session":
                skip = True
                continue
            if tok.startswith("--session=") or tok == "--quiet":
                continue
            rec.append(str(Path(tok).resolve()) if tok == src and not src.lstrip().startswith("<") else tok)
        self.argv = rec
        self.params = {k: repr(v) for k, v in sorted(vars(args).items())
                       if k not in ("presentation", "session", "quiet")}

    def say(self, line: str = ""):
        self.lines.append(line)

    def artifact(self, kind: str, suffix: str, content, label: str = ""):
        if self.session is None:
            return None
        return self.session.store(kind, suffix, content, command=self.args.command, argv=self.argv,
                                  inputs=self.inputs, params=self.params, label=label)

    def figure(self, label: str, png: bytes):
        if not self.args.figures:
            return
        if self.session is not None:
            path = self.artifact("figure", "png", png, label)
        else:
            path = Path(f"{self.args.command}-{label}.png")
            path.write_bytes(png)
        self.say(f"figure: {path.name}")

    def finish(self, code: int) -> int:
        report = "\n".join(self.lines) + "\n"
        self.artifact("report", "txt", report)
        if not self.args.quiet:
            sys.stdout.write(report)
        return code


def _limits(args) -> pipeline.Limits:
    if args.max_cosets < 1:
        raise UsageError("--max-cosets must be positive")
    return pipeline.Limits(max_cosets=args.max_cosets, strategy=args.strategy)


def _invariant_lines(run: _Run, m: abelian.RelationMatrix, bound: bool = False):
    inv = abelian.abelian_invariants(m)
    run.say(f"abelian invariants: {inv}")
    if inv.torsion:
        run.say(f"primary form: {inv.primary_str()}")
    for q in run.args.mod:
        try:
            run.say(f"modular: {abelian.invariants_mod(m, q)}")
        except ValueError as e:
            raise UsageError(str(e)) from None
    if bound:
        tb = abelian.torsion_order_bound(m)
        text = "none (rank 0)" if tb.bound is None else str(tb.bound)
        run.say(f"torsion order bound: {text} (free rank {tb.free_rank})")


def _cmd_parse(run: _Run, p: Presentation) -> int:
    text = format_presentation(p) + "\n"
    run.artifact("presentation", "pres", text)
    run.say(format_presentation(p))
    run.say(f"generators {p.ngens}, relators {len(p.relators)}, length {p.length}")
    return OK


def _cmd_abelian(run: _Run, p: Presentation) -> int:
    m = abelian.relation_matrix(p)
    run.artifact("matrix", "mat", abelian.format_matrix(m))
    _invariant_lines(run, m, run.args.bound)
    return OK


def _enum(run: _Run, p: Presentation, limits: pipeline.Limits):
    sub = parse_words(run.args.subgroup, p.generators)
    extra = parse_words(run.args.extra, p.generators)
    q = p.with_relators(extra)
    res = enumerate_cosets(q, sub, limits.enumeration)
    run.figure("trace", _plotting().enumeration_trace(res.stats, bound=limits.max_cosets))
    return res


def _overflow(run: _Run, stats, limits) -> int:
    run.say(f"overflow: {stats.max_active} active cosets reached the bound {limits.max_cosets}")
    run.say(f"cosets defined {stats.total_defined}")
    return LIMIT


def _cmd_enum(run: _Run, p: Presentation) -> int:
    limits = _limits(run.args)
    res = _enum(run, p, limits)
    if res.overflow:
        return _overflow(run, res.stats, limits)
    run.artifact("table", "table", format_table(res.table))
    run.say(f"index {res.index}")
    run.say(f"cosets defined {res.stats.total_defined}, max active {res.stats.max_active}")
    return OK


def _cmd_rs(run: _Run, p: Presentation) -> int:
    limits = _limits(run.args)
    res = _enum(run, p, limits)
    if res.overflow:
        return _overflow(run, res.stats, limits)
    sp = subgroup_presentation(p, res.table)
    text = format_subgroup_presentation(sp)
    run.artifact("subgroup", "sub", text)
    run.say(f"index {sp.index}")
    run.say(f"schreier generators {sp.presentation.ngens}, relators {sp.raw_relator_count} "
            f"({len(sp.presentation.relators)} nontrivial)")
    run.say(text.rstrip("\n"))
    return OK


def _cmd_simplify(run: _Run, p: Presentation) -> int:
    protect = [w.strip() for w in run.args.protect.split(",") if w.strip()]
    for name in protect:
        if name not in p.generators:
            raise UsageError(f"cannot protect unknown generator {name!r}")
    params = SimplifyParams(run.args.max_length_factor, frozenset(protect), run.args.max_passes)
    out, tr = simplify(p, params)
    run.artifact("presentation", "pres", format_presentation(out) + "\n")
    run.artifact("trace", "trace", format_trace(tr))
    run.say(format_presentation(out))
    run.say(f"generators {p.ngens} -> {out.ngens}, relators {len(p.relators)} -> {len(out.relators)}, "
            f"length {p.length} -> {out.length}")
    if tr.eliminated:
        run.say(format_trace(tr).rstrip("\n"))
    return OK


def _cmd_derived(run: _Run, p: Presentation) -> int:
    limits = _limits(run.args)
    rep = pipeline.derived_series(p, limits)
    for i, lv in enumerate(rep.levels):
        run.artifact("presentation", "pres", format_presentation(lv.presentation) + "\n", label=f"level{i}")
    run.say(str(rep).rstrip("\n"))
    run.figure("levels", _plotting().derived_levels(
        [lv.invariants.compact() for lv in rep.levels],
        [lv.presentation.ngens for lv in rep.levels],
        [lv.index for lv in rep.levels],
    ))
    return LIMIT if rep.termination is pipeline.Termination.LIMITS_EXCEEDED else OK


def _cmd_scan(run: _Run, p: Presentation) -> int:
    limits = _limits(run.args)
    words = None if run.args.words is None else parse_words(run.args.words, p.generators)
    fixed = parse_words(run.args.extra, p.generators)
    rep = pipeline.quotient_scan(p, words, run.args.exponents, limits, fixed=fixed)
    run.say(str(rep).rstrip("\n"))
    run.figure("orders", _plotting().scan_orders(
        [pipeline.format_power(e.word, e.exponent, p.generators) for e in rep.entries],
        [e.order for e in rep.entries],
        limits.max_cosets,
    ))
    return OK


def _cmd_preimage(run: _Run, p: Presentation) -> int:
    limits = _limits(run.args)
    sub = parse_words(run.args.subgroup, p.generators)
    extra = parse_words(run.args.extra, p.generators)
    try:
        sp = pipeline.preimage_presentation(p, extra, sub, limits)
    except pipeline.EnumerationOverflow as e:
        return _overflow(run, e.stats, limits)
    run.artifact("subgroup", "sub", format_subgroup_presentation(sp))
    run.say(f"index {sp.index}")
    run.say(f"schreier generators {sp.presentation.ngens}, relators {sp.raw_relator_count} "
            f"({len(sp.presentation.relators)} nontrivial)")
    pres = sp.presentation
    if not run.args.no_simplify:
        pres, tr = simplify(pres)
        run.artifact("presentation", "pres", format_presentation(pres) + "\n", label="simplified")
        run.say(f"simplified: generators {pres.ngens}, relators {len(pres.relators)}, length {pres.length}")
    m = abelian.relation_matrix(pres)
    run.artifact("matrix", "mat", abelian.format_matrix(m))
    _invariant_lines(run, m, run.args.bound)
    return OK


def _plotting():
    from . import plotting

    return plotting


COMMANDS = {
    "parse": _cmd_parse,
    "abelian": _cmd_abelian,
    "enum": _cmd_enum,
    "rs": _cmd_rs,
    "simplify": _cmd_simplify,
    "derived": _cmd_derived,
    "scan": _cmd_scan,
    "preimage": _cmd_preimage,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        run = _Run(args, argv)
        p = parse_presentation(run.text)
        code = COMMANDS[args.command](run, p)
    except (ParseError, UsageError) as e:
        print(f"fpgroups: error: {e}", file=sys.stderr)
        return USAGE
    return run.finish(code)


if __name__ == "__main__":
    sys.exit(main())
