"""Command-line front end: translate, trace, learn, verify, pipeline.

Every subcommand is non-interactive, takes an explicit seed where randomness
is involved, and accepts --config JSON (flags win over config values).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .corpus import CORPUS, corpus_path, load_entry
from .model import Domain, Problem
from .pddl_io import (
    load_domain,
    parse_domain,
    parse_problem,
    read_trace,
    write_flattened_domain,
    write_stripsplus_domain,
    write_trace,
)
from .pipeline import PipelineError, run_pipeline
from .synth import learn_domain
from .tracegen import generate_trace
from .translate import TranslateReport, translate_domain
from .verify import verify_equivalence


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    config = json.loads(Path(args.config).read_text())
    defaults = {a.dest: parser.get_default(a.dest)
                for a in parser._actions}  # noqa: SLF001
    for key, value in config.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise SystemExit(f"config: unknown option {key!r}")
        if getattr(args, key) == defaults.get(key):
            setattr(args, key, value)


def _load_problem(path: str, domain: Domain) -> Problem:
    return parse_problem(Path(path).read_text(), domain)


def cmd_translate(args, parser) -> int:
    _apply_config(args, parser)
    strips = parse_domain(Path(args.domain).read_text())
    traces = [read_trace(p) for p in args.trace]
    hidden, report = translate_domain(strips, traces, max_atoms=args.max_atoms)
    Path(args.out).write_text(write_stripsplus_domain(hidden))
    if args.report:
        path = Path(args.report)
        path.write_text(report.render())
        path.with_suffix(".json").write_text(report.to_json())
    if args.flat:
        Path(args.flat).write_text(write_flattened_domain(hidden))
    print(f"translated {strips.name}: {strips.total_explicit_args} -> "
          f"{hidden.total_explicit_args} explicit arguments")
    return 0


def cmd_trace(args, parser) -> int:
    _apply_config(args, parser)
    domain = load_domain(args.domain)
    problem = _load_problem(args.problem, domain)
    trace = generate_trace(problem, domain, args.length, args.seed,
                           set(args.drop))
    write_trace(trace, args.out)
    status = "dead-end" if trace.truncated else "ok"
    print(f"wrote {len(trace.steps)} steps to {args.out} ({status})")
    return 0


def cmd_learn(args, parser) -> int:
    _apply_config(args, parser)
    traces = [read_trace(p) for p in args.trace]
    domain, report = learn_domain(traces, max_atoms=args.max_atoms,
                                  jobs=args.jobs,
                                  minimize=not args.no_minimize)
    Path(args.out).write_text(write_stripsplus_domain(domain))
    if args.report:
        Path(args.report).write_text(report.render())
    if args.flat:
        Path(args.flat).write_text(write_flattened_domain(domain))
    total_z = sum(s.num_implicit for s in domain.schemas)
    print(f"learned {len(domain.schemas)} actions, "
          f"{domain.total_explicit_args} explicit and {total_z} implicit "
          f"arguments, in {report.seconds:.2f}s")
    return 0


def cmd_verify(args, parser) -> int:
    _apply_config(args, parser)
    hidden = load_domain(args.hidden)
    learned = load_domain(args.learned)
    problem = _load_problem(args.problem, hidden)
    report = verify_equivalence(problem, hidden, learned, args.pairs,
                                args.seed, walk_length=args.walk_length)
    print(report.render(), end="")
    if args.against_strips:
        original = parse_domain(Path(args.against_strips).read_text())
        if not args.translate_report:
            raise SystemExit("--against-strips needs --translate-report")
        tr = TranslateReport.from_json(Path(args.translate_report).read_text())
        from .verify import compare_against_strips

        agree, total = compare_against_strips(problem, original, hidden, tr,
                                              args.pairs, args.seed,
                                              walk_length=args.walk_length)
        print(f"against-strips (unscored): {agree}/{total} projected "
              f"groundings agree")
    return 0 if report.perfect else 1


def cmd_pipeline(args, parser) -> int:
    _apply_config(args, parser)
    if args.corpus:
        entry, strips, train, ver = load_entry(args.corpus)
        length = args.length or entry.length
        pairs = args.pairs or entry.pairs
        drops = list(args.drop) or list(entry.drops)
    else:
        for flag in ("domain", "train_problem", "verify_problem"):
            if not getattr(args, flag):
                raise SystemExit(f"--{flag.replace('_', '-')} is required "
                                 f"without --corpus")
        strips = parse_domain(Path(args.domain).read_text())
        train = _load_problem(args.train_problem, strips)
        ver = _load_problem(args.verify_problem, strips)
        length = args.length or 500
        pairs = args.pairs or 1000
        drops = list(args.drop)
    try:
        result = run_pipeline(
            strips, train, ver, length=length, seed=args.seed, pairs=pairs,
            drops=drops, max_atoms=args.max_atoms, jobs=args.jobs,
            walk_length=args.walk_length,
            outdir=Path(args.outdir) if args.outdir else None)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(result.summary_text(), end="")
    return 0 if result.verify_report.perfect else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stripsplus",
        description="Learn lifted STRIPS+ action models from random "
                    "state-action traces and verify them.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with option defaults")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--max-atoms", type=int, default=3,
                       help="stratum size bound (default 3)")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--walk-length", type=int, default=100)
        return p

    p = common(sub.add_parser("translate", help="STRIPS -> STRIPS+ demotion"))
    p.add_argument("--domain", required=True)
    p.add_argument("--trace", action="append", required=True,
                   help="trace of the original STRIPS domain (repeatable)")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--flat", help="also write a flattened PDDL view")
    p.set_defaults(fn=cmd_translate)

    p = common(sub.add_parser("trace", help="generate a random trace"))
    p.add_argument("--domain", required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--drop", action="append", default=[],
                   help="predicate to remove from recorded states")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_trace)

    p = common(sub.add_parser("learn", help="learn a STRIPS+ domain"))
    p.add_argument("--trace", action="append", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--flat")
    p.add_argument("--no-minimize", action="store_true",
                   help="keep every occurrence-invariant extra precondition")
    p.set_defaults(fn=cmd_learn)

    p = common(sub.add_parser("verify", help="hidden-vs-learned comparison"))
    p.add_argument("--hidden", required=True)
    p.add_argument("--learned", required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--against-strips",
                   help="also compare against the original STRIPS domain "
                        "(reported, not scored)")
    p.add_argument("--translate-report",
                   help="translate-report.json (for --against-strips)")
    p.set_defaults(fn=cmd_verify)

    p = common(sub.add_parser("pipeline",
                              help="translate + trace + learn + verify"))
    p.add_argument("--corpus", choices=sorted(CORPUS),
                   help="run a bundled corpus row")
    p.add_argument("--domain")
    p.add_argument("--train-problem")
    p.add_argument("--verify-problem")
    p.add_argument("--length", type=int)
    p.add_argument("--pairs", type=int)
    p.add_argument("--drop", action="append", default=[])
    p.add_argument("--outdir")
    p.set_defaults(fn=cmd_pipeline)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.fn(args, parser)


if __name__ == "__main__":
    sys.exit(main())
