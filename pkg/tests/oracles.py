"""Independent reference implementations used by the tests."""

import itertools
import random

from xsltevo.fitness import LineTarget, lcs_length, line_diff


def subsequences(seq):
    return {tuple(c) for r in range(len(seq) + 1) for c in itertools.combinations(seq, r)}


def all_sequences(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def dp_lcs(a, b):
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def exhaustive_diff_check(alphabet="abc", max_len=6):
    """Compare against all-subsequence brute force; returns (cases, mismatches)."""
    seqs = list(all_sequences(alphabet, max_len))
    subs = [subsequences(s) for s in seqs]
    cases = mismatches = 0
    for i, a in enumerate(seqs):
        target = LineTarget(a)
        for j, b in enumerate(seqs):
            common = max(map(len, subs[i] & subs[j]))
            expected = (len(b) - common, len(a) - common)
            cases += 1
            if line_diff(b, a) != expected or target.diff(b) != expected:
                mismatches += 1
    return cases, mismatches


def random_dp_check(n_pairs=10_000, seed=0):
    """Random longer pairs against the quadratic DP; returns (cases, mismatches)."""
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(n_pairs):
        k = rng.choice((2, 3, 5, 20))
        alphabet = [f"line {c}" for c in range(k)]
        a = [rng.choice(alphabet) for _ in range(rng.randint(7, 120))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(0, 120))]
        if lcs_length(a, b) != dp_lcs(a, b):
            mismatches += 1
    return n_pairs, mismatches


def closure_check(n_per_op=10_000, seed=0, n_docs=12):
    """Apply every legal operator ``n_per_op`` times per structure type.

    Parents come from a pool of random valid genomes over several random
    documents; the pool drifts as offspring replace members, so operators
    also see evolved shapes (filters, descendant steps, many templates).
    Returns ``{(stype, op): (applications, noops, invalid)}``.
    """
    from conftest import random_document
    from xsltevo.dom import build_catalog
    from xsltevo.genome import TYPE1, TYPE2, random_genome, validate
    from xsltevo.variation import legal_ops, vary

    rng = random.Random(seed)
    catalogs = [build_catalog(random_document(seed * 1000 + i, max_depth=rng.randint(1, 5))) for i in range(n_docs)]
    report = {}
    for stype in (TYPE1, TYPE2):
        pools = [[random_genome(stype, c, rng=rng) for _ in range(8)] for c in catalogs]
        stats = {op: [0, 0, 0] for op in legal_ops(stype)}
        schedule = [op for op in stats for _ in range(n_per_op)]
        rng.shuffle(schedule)
        for op in schedule:
            pool = rng.choice(pools)
            parent = rng.choice(pool)
            out = vary(op, parent, rng, mate=rng.choice(pool))
            stats[op][0] += 1
            if out is None:
                stats[op][1] += 1
                continue
            for child in out:
                if validate(child):
                    stats[op][2] += 1
                elif child.n_templates <= 12:
                    pool[rng.randrange(len(pool))] = child
        report.update({(stype, op): tuple(v) for op, v in stats.items()})
    return report


def roulette_check(table, stype, draws=100_000, seed=0):
    """Empirical operator frequencies against the table's probabilities.

    Returns ``(max_abs_error, chi_square_p)``.
    """
    from scipy.stats import chisquare

    from xsltevo.variation import select_operator

    rng = random.Random(seed)
    probs = {op: p for op, p in table.probabilities().items() if p > 0}
    counts = dict.fromkeys(probs, 0)
    for _ in range(draws):
        counts[select_operator(table, stype, rng)] += 1
    ops = list(probs)
    err = max(abs(counts[op] / draws - probs[op]) for op in ops)
    total = sum(probs.values())
    p_value = chisquare([counts[op] for op in ops], [draws * probs[op] / total for op in ops]).pvalue
    return err, p_value
