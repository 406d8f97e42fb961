"""Shift-orbit points of a binary expansion and the end-to-end check that
the normality measure of a digit prefix is bounded by the envelope of the
orbit's prefix discrepancies.

For a number z = 0.z1 z2 z3 ..., the n-th orbit point is the fractional
part of 2^(n-1) z, i.e. 0.z_n z_{n+1} .... The toolkit works with the
exact w-bit truncations 0.z_n ... z_{n+w-1} instead of the true orbit:
the first k digits of a truncated point still equal the k-window of the
digit stream at position n for every k <= w, so pattern counts are exactly
indicator sums of the truncated points over dyadic intervals, and those
intervals are a subfamily of the intervals defining the discrepancy. The
bound

    normality(Z_m) <= max_{j <= m} j * D_j(orbit prefix)

is therefore a theorem for the truncated points whenever w exceeds the
largest admissible block length; a failed checkpoint signals an
implementation bug, never a mathematical event.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .bitcore import BitSequence, ExactValue, Pattern, decimal_str
from .discrepancy import PointSet, prefix_deviation_numerators
from .generators import DigitStream
from .measure import max_block_length, normality_fast

__all__ = [
    "CheckpointResult",
    "VerificationReport",
    "orbit_points",
    "count_via_orbit",
    "lemma1_verify",
    "default_checkpoints",
]


def _window_numerators(bits: np.ndarray, count: int, w: int) -> np.ndarray:
    """Numerators of the w-bit truncated orbit points over denominator 2^w."""
    out = np.zeros(count, dtype=np.uint64)
    src = bits.astype(np.uint64)
    for j in range(w):
        out = (out << np.uint64(1)) | src[j : j + count]
    return out


def _check_window(n: int, w: int) -> None:
    if not 1 <= w <= 64:
        raise ValueError(f"window bits w={w} outside [1, 64]")
    need = max_block_length(n) + 1
    if w < need:
        raise ValueError(f"w={w} too small for n={n}; need w >= {need}")


def orbit_points(stream: DigitStream, n: int, w: int) -> PointSet:
    """First n orbit points of the stream's expansion, truncated to w bits.

    Point number m is the dyadic rational 0.z_m ... z_{m+w-1}; all points
    share the denominator 2^w. Requires w > log2(n) so that every
    admissible pattern length is covered by the truncation.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_window(n, w)
    digits = stream.prefix(n + w - 1) if n else BitSequence()
    nums = _window_numerators(digits.to_numpy(), n, w)
    return PointSet.from_dyadic(nums, w)


def count_via_orbit(stream: DigitStream, m: int, pattern: Pattern, w: int) -> int:
    """Occurrences of the pattern among the first m windows, counted as
    orbit points landing in the pattern's dyadic interval.

    Must agree with measure.count_occurrences on the same digits; the
    agreement is the bridge this module is built on.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 1 <= w <= 64:
        raise ValueError(f"window bits w={w} outside [1, 64]")
    if pattern.k > w:
        raise ValueError(f"pattern length {pattern.k} exceeds window bits {w}")
    digits = stream.prefix(m + w - 1)
    nums = _window_numerators(digits.to_numpy(), m, w)
    top = nums >> np.uint64(w - pattern.k) if pattern.k < w else nums
    return int((top == np.uint64(pattern.value)).sum())


@dataclass(frozen=True)
class CheckpointResult:
    n: int
    normality: ExactValue
    phi: Fraction
    margin: Fraction  # phi - normality; >= 0 iff the checkpoint passes
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    stream_label: str
    window_bits: int
    checkpoints: tuple[CheckpointResult, ...]
    overall_pass: bool

    def to_json_dict(self) -> dict:
        def frac_dict(f: Fraction) -> dict:
            return {
                "num": f.numerator,
                "den": f.denominator,
                "decimal": decimal_str(f.numerator, f.denominator),
            }

        return {
            "stream": self.stream_label,
            "window_bits": self.window_bits,
            "overall_pass": self.overall_pass,
            "checkpoints": [
                {
                    "n": c.n,
                    "normality": {
                        "num": c.normality.num,
                        "log2_den": c.normality.log2_den,
                        "decimal": c.normality.decimal(),
                    },
                    "phi": frac_dict(c.phi),
                    "margin": frac_dict(c.margin),
                    "pass": c.passed,
                }
                for c in self.checkpoints
            ],
        }


def default_checkpoints(n: int) -> list[int]:
    """Powers of two up to n, plus n itself."""
    cps = []
    p = 1
    while p <= n:
        cps.append(p)
        p <<= 1
    if cps[-1] != n:
        cps.append(n)
    return cps


def lemma1_verify(
    stream: DigitStream,
    n: int,
    w: int = 64,
    checkpoints: Optional[Sequence[int]] = None,
    threads: int = 1,
) -> VerificationReport:
    """Check normality(Z_m) <= Phi(m) at every checkpoint m.

    Phi is the running maximum of j * D_j over the w-bit orbit prefix
    discrepancies; since every j * D_j has denominator 2^w, the envelope
    is maintained as a running integer maximum. The digit prefix is shared
    by both sides, so the inequality is exact (no epsilon handling).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_window(n, w)
    if checkpoints is None:
        cps = default_checkpoints(n)
    else:
        cps = sorted(set(int(c) for c in checkpoints))
        if not cps:
            raise ValueError("empty checkpoint list")
        if cps[0] < 1 or cps[-1] > n:
            raise ValueError(f"checkpoints must lie in [1, {n}]")
    digits = stream.prefix(n + w - 1)
    nums = _window_numerators(digits.to_numpy(), n, w)
    dnums = prefix_deviation_numerators(nums, w)
    env = []
    best = 0
    for d in dnums:
        if d > best:
            best = d
        env.append(best)

    def evaluate(m: int) -> CheckpointResult:
        value = normality_fast(digits.prefix(m)).value
        phi = Fraction(env[m - 1], 1 << w)
        margin = phi - value.as_fraction()
        return CheckpointResult(
            n=m, normality=value, phi=phi, margin=margin, passed=margin >= 0
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = tuple(pool.map(evaluate, cps))
    else:
        results = tuple(evaluate(m) for m in cps)
    return VerificationReport(
        stream_label=stream.label,
        window_bits=w,
        checkpoints=results,
        overall_pass=all(c.passed for c in results),
    )
