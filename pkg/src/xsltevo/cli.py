"""Command line driver: batch experiments and small utilities."""

from __future__ import annotations

import argparse
import csv
import logging
import statistics
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .config import build_config, read_config
from .corpus import PROFILES, write_corpus
from .dom import Document, canonical_lines, read_xml, serialize
from .evolve import EvolveConfig, RunResult, run_evolution
from .exceptions import XSLTEvoError
from .fitness import evaluate
from .variation import Op
from .xslt import TransformLimits, parse_stylesheet, prune_shadowed, render_stylesheet, transform, transform_lines

log = logging.getLogger("xsltevo")

STATS_COLUMNS = [
    "run", "seed", "success", "evaluations", "generations",
    "deletions", "additions", "length", "wall_ms",
] + [op.value for op in Op]
SUMMARY_COLUMNS = ["runs", "successes", "median_evaluations", "q1_evaluations", "q3_evaluations"]


@dataclass
class ExperimentSpec:
    input: Document
    target_lines: list
    config: EvolveConfig
    runs: int = 30
    out_dir: Path | None = None
    record_time: bool = False
    results: list = field(default_factory=list)


def stats_row(i: int, r: RunResult, record_time: bool = False) -> dict:
    row = {
        "run": i,
        "seed": r.seed,
        "success": int(r.success),
        "evaluations": r.evaluations,
        "generations": r.generations,
        "deletions": r.fitness.deletions,
        "additions": r.fitness.additions,
        "length": r.fitness.length,
        "wall_ms": f"{1000 * r.wall_time:.1f}" if record_time else "",
    }
    for op in Op:
        row[op.value] = r.op_counts.get(op.value, 0)
    return row


def summarize(results) -> dict:
    """Success count and evaluation quartiles over the successful runs."""
    evals = sorted(r.evaluations for r in results if r.success)
    row = {"runs": len(results), "successes": len(evals)}
    if not evals:
        return {**row, "median_evaluations": "", "q1_evaluations": "", "q3_evaluations": ""}
    if len(evals) == 1:
        q1 = q3 = evals[0]
    else:
        q1, _, q3 = statistics.quantiles(evals, n=4, method="inclusive")
    return {**row, "median_evaluations": statistics.median(evals), "q1_evaluations": q1, "q3_evaluations": q3}


def _write_csv(path: Path, columns, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def run_experiment(spec: ExperimentSpec) -> list[RunResult]:
    """Run ``spec.runs`` seeded runs; run ``i`` uses seed ``base + i``.

    With ``out_dir`` set, writes ``run-<i>.xsl``, ``stats.csv`` and ``summary.csv``.
    """
    base = spec.config.seed
    out = spec.out_dir
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    results = []
    for i in range(spec.runs):
        r = run_evolution(replace(spec.config, seed=base + i), spec.input, spec.target_lines)
        if r.success:
            got = transform_lines(r.best.sheet, spec.input, TransformLimits())
            if got != spec.target_lines:
                raise XSLTEvoError(f"run {i}: reported solution does not reproduce the target")
        log.info("run %d seed %d: %s in %d evaluations", i, r.seed, r.fitness, r.evaluations)
        if out is not None:
            (out / f"run-{i}.xsl").write_text(render_stylesheet(prune_shadowed(r.best.sheet)), encoding="utf-8")
        results.append(r)
    spec.results = results
    if out is not None:
        _write_csv(out / "stats.csv", STATS_COLUMNS, [stats_row(i, r, spec.record_time) for i, r in enumerate(results)])
        _write_csv(out / "summary.csv", SUMMARY_COLUMNS, [summarize(results)])
    return results


def cmd_evolve(args) -> int:
    settings = read_config(args.config) if args.config else {}
    overrides = {
        "evolve.type": args.type,
        "evolve.population": args.pop,
        "evolve.generations": args.gens,
        "evolve.tournament": args.tournament,
        "evolve.runs": args.runs,
        "evolve.seed": args.seed,
        "output.wrapper-tag": args.wrapper_tag,
        "output.line-tag": args.line_tag,
    }
    input_doc = read_xml(args.input)
    target_doc = read_xml(args.target)
    if args.wrapper_from_root:
        overrides["output.wrapper-tag"] = target_doc.root.tag
    config, runs = build_config(settings, overrides)
    target_lines = canonical_lines(target_doc, config.line_tag)
    spec = ExperimentSpec(input_doc, target_lines, config, runs, Path(args.out), args.record_time)
    results = run_experiment(spec)
    s = summarize(results)
    print(
        f"{s['successes']}/{s['runs']} successful; median evaluations {s['median_evaluations'] or '-'} "
        f"(q1 {s['q1_evaluations'] or '-'}, q3 {s['q3_evaluations'] or '-'}); results in {args.out}"
    )
    return 0


def cmd_apply(args) -> int:
    sheet = parse_stylesheet(Path(args.stylesheet).read_bytes(), args.stylesheet)
    out = transform(sheet, read_xml(args.input), TransformLimits())
    sys.stdout.write('<?xml version="1.0" encoding="UTF-8"?>\n' + serialize(out, indent=True))
    return 0


def cmd_fitness(args) -> int:
    sheet = parse_stylesheet(Path(args.stylesheet).read_bytes(), args.stylesheet)
    target = canonical_lines(read_xml(args.target), sheet.line_tag)
    print(evaluate(sheet, read_xml(args.input), target, TransformLimits()))
    return 0


def cmd_gen_corpus(args) -> int:
    dirs = write_corpus(args.dir, args.profile)
    print(f"wrote {len(dirs)} pairs to {args.dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xsltevo", description="Evolve XSLT stylesheets from an input/target pair.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("evolve", help="run a batch of seeded evolutionary runs")
    e.add_argument("--input", required=True)
    e.add_argument("--target", required=True)
    e.add_argument("--type", choices=["1", "2"])
    e.add_argument("--pop", type=int)
    e.add_argument("--gens", type=int)
    e.add_argument("--tournament", type=int)
    e.add_argument("--runs", type=int)
    e.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    e.add_argument("--config")
    e.add_argument("--out", default="xsltevo-out")
    wrap = e.add_mutually_exclusive_group()
    wrap.add_argument("--wrapper-tag")
    wrap.add_argument("--wrapper-from-root", action="store_true", help="use the target's root tag as wrapper")
    e.add_argument("--line-tag")
    e.add_argument("--record-time", action="store_true", help="fill the wall_ms column (breaks byte-identical output)")
    e.set_defaults(func=cmd_evolve)

    a = sub.add_parser("apply", help="apply a stylesheet and print the output XML")
    a.add_argument("stylesheet")
    a.add_argument("input")
    a.set_defaults(func=cmd_apply)

    f = sub.add_parser("fitness", help="print the fitness of a stylesheet on an input/target pair")
    f.add_argument("stylesheet")
    f.add_argument("input")
    f.add_argument("target")
    f.set_defaults(func=cmd_fitness)

    g = sub.add_parser("gen-corpus", help="write the bundled graded corpus")
    g.add_argument("dir")
    g.add_argument("--profile", choices=sorted(PROFILES), default="default")
    g.set_defaults(func=cmd_gen_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.func(args)
    except (XSLTEvoError, OSError) as exc:
        print(f"xsltevo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
