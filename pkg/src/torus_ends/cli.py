"""Command line: torus-ends <command> --char "x,y,z" [options].

Output is a JSON record (or CSV with --format csv) on stdout or --out.
Exit codes: 0 ok, 2 bad input, 3 budget exhausted under --strict.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import serialize as ser
from .bq import Exhausted, check_bq
from .characters import EPS, Character, ParseError, apply_word, classify_type, trace_word
from .ends import Budgets, Undetermined, classify, cover_for
from .farey import FareyError, parse_slope
from .render import MAX_DEPTH, RenderError, render_svg
from .tau import TauError, TauExhausted, WALK_WINDOW, tau_from_character
from .trace_tree import trace_at

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED = 0, 2, 3


class InputError(ValueError):
    pass


def _env(name, conv, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        v = conv(raw)
    except ValueError:
        raise InputError(f"{name}={raw!r} is not a valid value") from None
    if v <= 0:
        raise InputError(f"{name} must be positive")
    return v


def _positive(conv):
    def f(text):
        try:
            v = conv(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v

    return f


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", required=True, help='character "x,y,z", e.g. "0,1,1i"')
    common.add_argument("--tol", type=_positive(float), help="tolerance eps (env TORUS_ENDS_TOL)")
    common.add_argument("--max-vertices", type=_positive(int), help="search budget (env TORUS_ENDS_MAX_VERTICES)")
    common.add_argument("--depth", type=_positive(int), help="cover/render depth (env TORUS_ENDS_DEPTH)")
    common.add_argument("--window", type=_positive(int), default=WALK_WINDOW, help="boundary walk window")
    common.add_argument("--seed", type=int, default=0, help="recorded in the config echo")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the record here instead of stdout")
    common.add_argument("--strict", action="store_true", help="exit 3 when a budget runs out")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the record")

    p = argparse.ArgumentParser(prog="torus-ends", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("trace", parents=[common], help="trace of a slope or word")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--slope")
    g.add_argument("--word")
    sub.add_parser("kappa", parents=[common], help="kappa and character class")
    a = sub.add_parser("act", parents=[common], help="apply mapping class / sign-change generators")
    a.add_argument("--gens", required=True, help="space separated generators among c s xy yz zx")
    sub.add_parser("bq", parents=[common], help="extended BQ-conditions")
    sub.add_parser("ends", parents=[common], help="arc cover of the end invariants")
    c = sub.add_parser("classify", parents=[common], help="shape of the end invariant set")
    c.add_argument("--discrete", action="store_true", help="assert the image is discrete")
    tp = sub.add_parser("tau", parents=[common], help="tau-reduction for imaginary characters")
    tp.add_argument("--trace", action="store_true", help="include the state trace")
    r = sub.add_parser("render", parents=[common], help="SVG of the tessellation and cover")
    r.add_argument("--no-cover", action="store_true")
    return p


def config_from(args) -> dict:
    eps = args.tol if args.tol is not None else _env("TORUS_ENDS_TOL", float, EPS)
    mv = args.max_vertices if args.max_vertices is not None else _env("TORUS_ENDS_MAX_VERTICES", int, None)
    depth = args.depth if args.depth is not None else _env("TORUS_ENDS_DEPTH", int, None)
    return {"tol": eps, "max_vertices": mv, "depth": depth, "window": args.window, "seed": args.seed,
            "format": args.format, "strict": args.strict}


def _base_record(command, ch, cfg) -> dict:
    return {
        "command": command,
        "character": ser.character(ch),
        "kappa": ser.cplx(ch.kappa),
        "config": {k: v for k, v in cfg.items() if k != "format"},
    }


def run_command(args, cfg):
    """Returns (record, exhausted, csv_text or None, svg or None)."""
    ch = Character.parse(args.char)
    eps = cfg["tol"]
    rec = _base_record(args.command, ch, cfg)
    exhausted = False
    csv_text = None
    svg = None
    cmd = args.command
    if cmd == "trace":
        if args.slope is not None:
            s = parse_slope(args.slope)
            rec["slope"] = str(s)
            rec["value"] = ser.cplx(trace_at(ch, s))
        else:
            rec["word"] = args.word
            rec["value"] = ser.cplx(trace_word(ch, args.word))
    elif cmd == "kappa":
        rec["class"] = classify_type(ch, eps).as_dict()
    elif cmd == "act":
        gens = args.gens.split()
        try:
            new = apply_word(ch, gens)
        except ValueError as e:
            raise InputError(str(e)) from None
        rec["gens"] = gens
        rec["result"] = ser.character(new)
        rec["result_kappa"] = ser.cplx(new.kappa)
        rec["drift"] = ser.real(abs(new.kappa - ch.kappa))
    elif cmd == "bq":
        limit = cfg["max_vertices"] or 10**6
        v = check_bq(ch, limit, eps)
        rec.update(ser.bq_verdict(v))
        used = v.visited if isinstance(v, Exhausted) else len(getattr(v, "attractor", ()))
        rec["budget"] = {"used": used, "limit": limit}
        exhausted = isinstance(v, Exhausted)
    elif cmd == "ends":
        depth = cfg["depth"] or 12
        limit = cfg["max_vertices"] or 10**6
        cov = cover_for(ch, depth, limit, eps)
        rec["cover"] = ser.cover(cov)
        rec["budget"] = {"used": len(cov.discarded), "limit": limit}
        exhausted = cov.partial
        csv_text = ser.cover_csv(cov)
    elif cmd == "classify":
        b = Budgets(discrete=args.discrete)
        if cfg["max_vertices"]:
            b.max_vertices = cfg["max_vertices"]
        if cfg["depth"]:
            b.depth = cfg["depth"]
        r = classify(ch, b, eps)
        rec.update(ser.classification(r))
        rec["budget"] = {"limit": b.max_vertices}
        exhausted = isinstance(r, Undetermined) and "exhausted" in r.reason
    elif cmd == "tau":
        limit = cfg["max_vertices"] or 10**6
        try:
            out = tau_from_character(ch, limit, eps)
        except TauError as e:
            raise InputError(str(e)) from None
        rec.update(ser.tau_outcome(out, args.trace))
        rec["budget"] = {"limit": limit}
        exhausted = isinstance(out, TauExhausted)
    elif cmd == "render":
        depth = cfg["depth"] or 8
        if depth > MAX_DEPTH:
            raise InputError(f"render depth must be <= {MAX_DEPTH}")
        cov = None if args.no_cover else cover_for(ch, max(depth, 1), cfg["max_vertices"] or 10**6, eps)
        svg = render_svg(ch, depth, cov)
        rec["depth"] = depth
        if cov is not None:
            rec["cover"] = ser.cover(cov)
    return rec, exhausted, csv_text, svg


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    t0 = time.perf_counter()
    try:
        cfg = config_from(args)
        rec, exhausted, csv_text, svg = run_command(args, cfg)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.text:
            print(f"  {e.text}\n  {' ' * e.pos}^", file=sys.stderr)
        return EXIT_INPUT
    except (FareyError, InputError, RenderError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        rec["timing"] = {"seconds": time.perf_counter() - t0}
    try:
        if svg is not None:
            if args.out:
                _emit(svg, args.out)
                sys.stdout.write(ser.dumps(rec) + "\n")
            else:
                sys.stdout.write(svg)
        elif args.format == "csv":
            _emit(csv_text if csv_text is not None else ser.flat_csv(rec), args.out)
        else:
            _emit(ser.dumps(rec) + "\n", args.out)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if exhausted and args.strict:
        return EXIT_EXHAUSTED
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
