"""Command-line entry point: ``fccmatter {gen,check,elect,ids,render}``.

Exit codes: 0 success, 2 usage or bad input, 3 stall or not electable,
4 round limit reached.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import configuration as conf
from .configuration import Configuration, ConfigurationError
from .electability import is_electable
from .heterogeneous import PREDICATES, HeterogeneousElection
from .homogeneous import HomogeneousElection
from .identifiers import PipelineError, run_pipeline
from .lattice import LatticeError
from .render import final_states, render_svg, render_text
from .runtime import TRACE_SCHEMA, run

EXIT_OK, EXIT_USAGE, EXIT_STALL, EXIT_TIMEOUT = 0, 2, 3, 4

_RECT = re.compile(r"^(\d+)x(\d+)@z?(-?\d+)$")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def _load(args) -> Configuration:
    if not args.input:
        raise UsageError("--input is required")
    try:
        return conf.load(args.input)
    except OSError as e:
        raise UsageError(f"cannot read {args.input}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{args.input} is not JSON: {e}") from None


# ---------------------------------------------------------------- subcommands


def cmd_gen(args) -> int:
    if args.shape == "rect":
        if not args.spec:
            raise UsageError("rect needs at least one WxH@Z layer spec")
        specs = []
        for s in args.spec:
            m = _RECT.match(s)
            if not m:
                raise UsageError(f"bad rectangle spec {s!r} (expected e.g. 3x3@0)")
            w, h, z = map(int, m.groups())
            if w < 1 or h < 1:
                raise UsageError(f"empty rectangle {s!r}")
            specs.append(conf.block(w, h, z))
        cfg = conf.gen_rectangle_stack(specs)
    elif args.shape == "circle":
        if args.radius < 1 or args.layers < 1:
            raise UsageError("--radius and --layers must be >= 1")
        cfg = conf.aligned_circle_stack([args.radius] * args.layers)
    else:
        if args.n is None or args.n < 1:
            raise UsageError("random needs --n >= 1")
        gen = conf.gen_random_electable if args.electable else conf.gen_random_connected
        cfg = gen(args.n, args.seed)
    if args.orient == "random":
        cfg = cfg.with_orientations(conf.random_orientations(cfg.occupied, args.seed))
    cfg = Configuration(cfg.occupied, cfg.orientations, args.seed)
    _emit(_dumps(conf.to_json(cfg)), args.out)
    verdict = is_electable(cfg)
    print(f"particles: {len(cfg)}  electable: {str(verdict.electable).lower()}", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = _load(args)
    verdict = is_electable(cfg)
    _emit(_dumps(verdict.to_json()), args.out)
    return EXIT_OK if verdict.electable else EXIT_STALL


def cmd_elect(args) -> int:
    cfg = _load(args)
    if args.mode == "homog":
        if not cfg.homogeneous:
            raise UsageError("homog mode needs identity orientations on every particle")
        protocol = HomogeneousElection()
    else:
        protocol = HeterogeneousElection(args.predicate)
    res = run(cfg, protocol, args.seed, args.round_limit, trace=bool(args.trace_out))
    leaders = [p for p, s in res.states.items() if s.tag == "L"]
    doc = {
        "algorithm": res.algorithm,
        "status": res.status,
        "leader": list(leaders[0]) if res.status == "ok" else None,
        "rounds": res.rounds,
        "decision_round": res.decision_round,
        "messages": res.messages,
        "census": res.census(),
        "seed": args.seed,
    }
    if args.trace_out:
        res.write_trace(args.trace_out)
    _emit(_dumps(doc), args.out)
    return {"ok": EXIT_OK, "stall": EXIT_STALL, "timeout": EXIT_TIMEOUT}[res.status]


def cmd_ids(args) -> int:
    cfg = _load(args)
    if args.mode == "homog" and not cfg.homogeneous:
        raise UsageError("homog mode needs identity orientations on every particle")
    try:
        res = run_pipeline(cfg, args.mode, args.ell, args.seed, args.round_limit,
                           trace=bool(args.trace_out))
    except PipelineError as e:
        print(f"error: pipeline stage {e}", file=sys.stderr)
        return EXIT_TIMEOUT if e.timeout else EXIT_STALL
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as f:
            f.write("\n".join(res.trace_lines()) + "\n")
    _emit(_dumps(res.to_json()), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    if not args.input:
        raise UsageError("--input is required")
    try:
        with open(args.input, encoding="utf-8") as f:
            first = f.readline()
            rest = f.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.input}: {e.strerror}") from None
    try:
        head = json.loads(first)
    except json.JSONDecodeError:
        head = None
    labels = {}
    if isinstance(head, dict) and head.get("schema") == TRACE_SCHEMA:
        cfg = conf.from_json({"particles": head["particles"], "orientations": head["orientations"]})
        events = [json.loads(x) for x in rest.splitlines() if x.strip()]
        labels = final_states(events)
    else:
        try:
            cfg = conf.from_json(json.loads(first + rest))
        except json.JSONDecodeError as e:
            raise UsageError(f"{args.input} is neither a configuration nor a trace: {e}") from None
        if args.labels == "orientation":
            labels = {p: o.index for p, o in cfg.orientations.items()}
        elif args.labels == "ids":
            try:
                res = run_pipeline(cfg, args.mode, args.ell, args.seed, args.round_limit)
            except PipelineError as e:
                print(f"error: pipeline stage {e}", file=sys.stderr)
                return EXIT_TIMEOUT if e.timeout else EXIT_STALL
            labels = dict(res.local_ids)
    if args.format == "svg":
        text = render_svg(cfg, labels)
    elif args.format == "json":
        text = _dumps({"layers": sorted({c.z for c in cfg.occupied}),
                       "labels": [[list(p), v] for p, v in sorted(labels.items())]})
    else:
        text = render_text(cfg, labels)
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fccmatter", description="Programmable matter on the FCC grid.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode=False):
        p.add_argument("--input", help="configuration JSON file")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="scheduler seed (default 0)")
        p.add_argument("--round-limit", type=int, default=10_000)
        if mode:
            p.add_argument("--mode", choices=("homog", "hetero"), default="hetero")
            p.add_argument("--ell", type=int, default=2)

    g = sub.add_parser("gen", help="generate a configuration")
    g.add_argument("shape", choices=("rect", "circle", "random"))
    g.add_argument("spec", nargs="*", help="rect layers as WxH@Z, e.g. 3x3@0 2x2@1")
    g.add_argument("--radius", type=int, default=1)
    g.add_argument("--layers", type=int, default=1)
    g.add_argument("--n", type=int)
    g.add_argument("--electable", action="store_true", help="random: keep the set electable")
    g.add_argument("--orient", choices=("identity", "random"), default="identity")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="electability verdict")
    common(c)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("elect", help="run a leader election")
    common(e, mode=True)
    e.add_argument("--trace-out", help="write a JSONL trace")
    e.add_argument("--predicate", choices=PREDICATES, default="geometric",
                   help="hetero: contractibility test driving retirements")
    e.set_defaults(func=cmd_elect)

    i = sub.add_parser("ids", help="election, tree, renumbering and identifiers")
    common(i, mode=True)
    i.add_argument("--trace-out", help="write the JSONL traces of every stage")
    i.set_defaults(func=cmd_ids)

    r = sub.add_parser("render", help="draw a configuration or trace per layer")
    common(r, mode=True)
    r.add_argument("--format", choices=("text", "svg", "json"), default="text")
    r.add_argument("--labels", choices=("none", "orientation", "ids"), default="none")
    r.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "round_limit", 1) < 1:
        print("error: --round-limit must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "ell", 1) < 1:
        print("error: --ell must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ConfigurationError, LatticeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
