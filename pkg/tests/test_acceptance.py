"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. Everything asserted here is exact unless a line
says otherwise; random inputs are drawn from the package's own seeded
generator so every run checks identical data.
"""

import itertools
import random
import time
import tracemalloc
from fractions import Fraction

from normbits.bitcore import BitSequence, ExactValue
from normbits.cli import run
from normbits.discrepancy import (
    PointSet,
    extreme_discrepancy,
    extreme_discrepancy_reference,
)
from normbits.generators import champernowne_bits, random_bits, sample_seed
from normbits.measure import (
    max_block_length,
    normality_fast,
    normality_naive,
)
from normbits.orbit import lemma1_verify
from normbits.search import exhaustive_min
from normbits.generators import GeneratorSpec


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[criterion {num}] {'PASS' if ok else 'FAIL'} {name}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    checked = 0
    for n in range(0, 13):
        for bits in itertools.product((0, 1), repeat=n):
            seq = BitSequence(bits)
            assert normality_fast(seq).value == normality_naive(seq).value, bits
            checked += 1
    for n in (16, 64, 256, 1024, 4096):
        for i in range(200):
            seq = random_bits(sample_seed(1000 + n, i), n)
            assert normality_fast(seq).value == normality_naive(seq).value, (n, i)
            checked += 1
    elapsed = time.perf_counter() - t0
    report(
        1,
        "oracle equivalence fast == naive",
        elapsed < 120,
        f"{checked} sequences, exact, {elapsed:.1f}s < 120s",
    )


def test_criterion_2_zeros_closed_form():
    for exp in range(3, 13):
        n = 1 << exp
        expected = max(
            ExactValue((n + 1 - k) * ((1 << k) - 1), k)
            for k in range(1, max_block_length(n) + 1)
        )
        seq = BitSequence([0] * n)
        assert normality_fast(seq).value == expected, n
        if n <= 1024:
            assert normality_naive(seq).value == expected, n
        if n == 8:
            assert expected == ExactValue(21, 2)
    report(2, "all-zeros closed form, N = 8..4096", True, "exact, incl. 21/4 at N=8")


def test_criterion_3_lemma_theorem_check():
    t0 = time.perf_counter()
    # 500 seeded random streams at N=4096, W=64
    for i in range(500):
        rep = lemma1_verify(GeneratorSpec(kind="random", seed=i).stream(), 4096, 64)
        assert rep.overall_pass, f"random:{i}"
    # Champernowne at N = 2^16
    rep = lemma1_verify(GeneratorSpec(kind="champernowne").stream(), 1 << 16, 64)
    assert rep.overall_pass
    # rationals through the real CLI, checking the exit-code contract
    for spec in ("rational:1/3", "rational:5/7"):
        code = run(
            ["verify-lemma", "--gen", spec, "--n", str(1 << 12), "--w", "64",
             "--output", "/dev/null"]
        )
        assert code == 0, spec
    elapsed = time.perf_counter() - t0
    report(
        3,
        "lemma verification: 500 random + champernowne + rationals",
        elapsed < 600,
        f"all checkpoints pass, {elapsed:.1f}s < 600s",
    )


def test_criterion_4_discrepancy_oracle():
    checked = 0
    for n in range(1, 6):
        for combo in itertools.combinations_with_replacement(range(16), n):
            pts = PointSet(Fraction(c, 16) for c in combo)
            rep = extreme_discrepancy(pts)
            assert rep.extreme == extreme_discrepancy_reference(pts), combo
            assert rep.star <= rep.extreme <= 2 * rep.star, combo
            checked += 1
    rng = random.Random(2024)
    for _ in range(100):
        n = rng.randint(1, 512)
        w = rng.randint(1, 16)
        pts = PointSet(Fraction(rng.randrange(1 << w), 1 << w) for _ in range(n))
        rep = extreme_discrepancy(pts)
        assert rep.extreme == extreme_discrepancy_reference(pts)
        assert rep.star <= rep.extreme <= 2 * rep.star
        checked += 1
    report(
        4,
        "discrepancy oracle agreement",
        True,
        f"{checked} point sets exact (all dyadic/16 N<=5 + 100 random N<=512)",
    )


def test_criterion_5_search_correctness():
    for n in range(1, 15):
        pruned = exhaustive_min(n, prune=True)
        plain = exhaustive_min(n, prune=False)
        assert pruned.min_value == plain.min_value, n
        for w in pruned.witnesses:
            assert normality_naive(w).value == pruned.min_value, (n, w.to01())
    assert exhaustive_min(2).min_value == ExactValue(1, 1)
    assert exhaustive_min(4).min_value == ExactValue(3, 2)
    report(
        5,
        "search: pruned == plain for N <= 14, witnesses rechecked",
        True,
        "min(2)=1/2, min(4)=3/4 pinned",
    )


def test_criterion_6_complement_invariance():
    for n, count in ((64, 500), (1024, 500)):
        for i in range(count):
            seq = random_bits(sample_seed(3000 + n, i), n)
            assert (
                normality_fast(seq).value == normality_fast(seq.complement()).value
            ), (n, i)
    report(6, "complement invariance on 1000 random sequences", True, "exact")


def _median_ratio(n: int, samples: int, seed: int) -> float:
    import math

    ratios = sorted(
        float(normality_fast(random_bits(sample_seed(seed, i), n)).value)
        / math.sqrt(n)
        for i in range(samples)
    )
    mid = samples // 2
    if samples % 2:
        return ratios[mid]
    return 0.5 * (ratios[mid - 1] + ratios[mid])


def test_criterion_7_typical_order_calibration():
    med10 = _median_ratio(1 << 10, 200, 71)
    med14 = _median_ratio(1 << 14, 200, 72)
    ratio = med14 / med10
    ok = 0.5 < ratio < 2.0
    report(
        7,
        "median measure/sqrt(N) scale-stable from 2^10 to 2^14",
        ok,
        f"medians {med10:.4f} vs {med14:.4f}, ratio {ratio:.3f} within (0.5, 2)",
    )


def test_criterion_8_growth_contrast():
    n = 1 << 16
    champ = normality_fast(champernowne_bits(n)).value
    values = sorted(
        normality_fast(random_bits(sample_seed(888, i), n)).value
        for i in range(200)
    )
    p5 = values[9]  # nearest-rank 5th percentile of 200 exact values
    ok = champ < p5
    report(
        8,
        "champernowne measure below random 5th percentile at N=2^16",
        ok,
        f"champernowne {champ} ({float(champ):.1f}) vs p5 {p5} ({float(p5):.1f})",
    )


def test_criterion_9_performance():
    seq = random_bits(424242, 1 << 20)
    tracemalloc.start()
    t0 = time.perf_counter()
    rep = normality_fast(seq)
    elapsed = time.perf_counter() - t0
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    assert rep.value > ExactValue(0)
    ok = elapsed < 5.0 and peak < 256 * 2**20
    report(
        9,
        "fast evaluator at N=2^20",
        ok,
        f"{elapsed:.2f}s < 5s, peak {peak / 2**20:.1f} MiB < 256 MiB",
    )
