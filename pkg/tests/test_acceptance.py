"""Acceptance suite: one verdict line per criterion in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py -v``; the evolutionary
criteria take about two minutes on one core.
"""

import statistics
import subprocess
import sys
import time

import pytest

from xsltevo.cli import ExperimentSpec, run_experiment
from xsltevo.corpus import corpus_pair, write_corpus
from xsltevo.dom import parse_xml
from xsltevo.evolve import EvolveConfig
from xsltevo.variation import default_operator_table
from xsltevo.xslt import parse_stylesheet, transform_lines

from conftest import PAGE_XML, H2_XPATH_XSL, H2_CHAIN_XSL, H2_LINES, record
from oracles import closure_check, exhaustive_diff_check, random_dp_check, roulette_check

pytestmark = pytest.mark.slow

SEEDS = 30
EASY = (1, 2, 3, 4)


def experiment(pair: int, stype: int):
    p = corpus_pair(pair)
    config = EvolveConfig(structure_type=stype, population_size=128, max_generations=200, tournament_size=5, seed=0)
    return run_experiment(ExperimentSpec(p.input, p.target_lines, config, runs=SEEDS))


@pytest.fixture(scope="module")
def easy_runs():
    start = time.perf_counter()
    results = {n: experiment(n, 1) for n in EASY}
    return results, time.perf_counter() - start


def test_criterion_1_h2_stylesheets():
    doc = parse_xml(PAGE_XML)
    sheets = {"xpath": parse_stylesheet(H2_XPATH_XSL), "chain": parse_stylesheet(H2_CHAIN_XSL)}
    outputs = {k: transform_lines(s, doc) for k, s in sheets.items()}
    timing = {}
    for k, s in sheets.items():
        best = float("inf")
        for _ in range(200):
            t0 = time.perf_counter()
            transform_lines(s, doc)
            best = min(best, time.perf_counter() - t0)
        timing[k] = best
    ok = all(v == H2_LINES for v in outputs.values()) and all(t < 1e-3 for t in timing.values())
    detail = ", ".join(f"{k} {outputs[k] == H2_LINES and 'exact' or 'WRONG'} in {1e6 * timing[k]:.0f} us" for k in sheets)
    assert record(1, ok, detail)


def test_criterion_2_line_diff_oracles():
    cases, bad = exhaustive_diff_check("abc", 6)
    n_random, bad_random = random_dp_check(10_000, seed=2024)
    ok = bad == 0 and bad_random == 0 and cases == 1093 ** 2
    detail = f"exhaustive {cases} pairs, {bad} mismatches; DP {n_random} random pairs, {bad_random} mismatches"
    assert record(2, ok, detail)


def test_criterion_3_easy_pairs_success(easy_runs):
    results, elapsed = easy_runs
    counts = {n: sum(r.success for r in rs) for n, rs in results.items()}
    ok = all(c >= 28 for c in counts.values()) and elapsed < 15 * 60
    detail = ", ".join(f"pair {n} {c}/{SEEDS}" for n, c in counts.items()) + f"; {elapsed:.0f} s total"
    assert record(3, ok, detail)


def test_criterion_4_easy_pairs_evaluations(easy_runs):
    results, _ = easy_runs
    medians = {}
    for n, rs in results.items():
        evals = [r.evaluations for r in rs if r.success]
        medians[n] = statistics.median(evals) if evals else float("inf")
    ok = all(m <= 10_000 for m in medians.values())
    detail = ", ".join(f"pair {n} median {m:g}" for n, m in medians.items())
    assert record(4, ok, detail)


def test_criterion_5_type2_beats_type1_on_pair6():
    t1 = sum(r.success for r in experiment(6, 1))
    t2 = sum(r.success for r in experiment(6, 2))
    ok = t2 - t1 >= 8
    assert record(5, ok, f"type 2 {t2}/{SEEDS} vs type 1 {t1}/{SEEDS} (margin {t2 - t1})")


def test_criterion_6_operator_closure():
    report = closure_check(n_per_op=10_000, seed=6)
    invalid = sum(v[2] for v in report.values())
    applications = sum(v[0] for v in report.values())
    noops = sum(v[1] for v in report.values())
    ok = invalid == 0 and all(v[0] == 10_000 for v in report.values())
    detail = f"{len(report)} (type, operator) combinations, {applications} applications, {noops} flagged no-ops, {invalid} invalid"
    assert record(6, ok, detail)


def test_criterion_7_cli_determinism(tmp_path):
    write_corpus(tmp_path / "corpus", "easy")
    pair = tmp_path / "corpus" / "pair2"
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "xsltevo", "evolve", "--input", str(pair / "input.xml"),
               "--target", str(pair / "target.xml"), "--type", "1", "--runs", "4", "--seed", "3", "--out", str(out)]
        subprocess.run(cmd, check=True, capture_output=True)
        outs.append(out)
    files = sorted(f.name for f in outs[0].iterdir())
    same = files == sorted(f.name for f in outs[1].iterdir()) and all(
        (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes() for f in files
    )
    ok = same and "stats.csv" in files and "run-0.xsl" in files
    assert record(7, ok, f"{len(files)} files compared, {'byte-identical' if same else 'DIFFERENT'}")


def test_criterion_8_roulette_fidelity():
    details = []
    ok = True
    for stype in ("type1", "type2"):
        err, p = roulette_check(default_operator_table(stype), stype, draws=100_000, seed=8)
        ok &= err <= 0.02 and p > 0.01
        details.append(f"{stype} max error {err:.4f}, chi-square p {p:.3f}")
    assert record(8, ok, "; ".join(details))
