"""Exact evaluation of the normality measure of a finite binary sequence.

The measure is the maximum, over block lengths k with 2^k <= N, patterns X
of length k, and window counts M <= N+1-k, of |T(E,M,X) - M/2^k|, where T
counts the windows among the first M that equal X. Two evaluators are
provided:

* :func:`normality_naive` walks every (k, X, M) triple by definition and is
  the testing oracle.
* :func:`normality_fast` runs one pass per k. For fixed k the deviation at
  step M is max(maxcount - M/2^k, M/2^k - mincount), and both extremes can
  be read off the per-window occurrence ranks: the max side attains its
  maximum only at steps where the arriving window sets a new count (so
  max_M (2^k*maxcount - M) = max_i (2^k*occ_i - i)), and the min side is
  piecewise linear between the steps where the rarest pattern catches up
  (so it is maximized at the step just before each catch-up, recoverable
  from the last position holding each occurrence rank). This turns the
  per-k scan into a handful of vectorized passes.

All deviations are carried as integers 2^k*T - M over the denominator 2^k;
cross-k comparisons shift to a common denominator. No floats are involved
in any decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitcore import BitSequence, ExactValue, Pattern

__all__ = ["NormalityReport", "count_occurrences", "normality_naive", "normality_fast"]


def max_block_length(n: int) -> int:
    """Largest admissible k (floor(log2 n)); 0 when the k-range is empty."""
    return n.bit_length() - 1 if n >= 1 else 0


@dataclass(frozen=True)
class NormalityReport:
    """Measure value with the witness triple attaining it.

    The witness is deterministic: smallest k, then smallest pattern value,
    then smallest M among all maximizers. For N <= 1 the k-range is empty,
    the value is 0, and the witness fields are None.
    """

    n: int
    value: ExactValue
    witness_k: Optional[int]
    witness_pattern: Optional[Pattern]
    witness_m: Optional[int]
    witness_t: Optional[int]
    per_k_max: tuple[tuple[int, ExactValue], ...]

    def to_json_dict(self) -> dict:
        return {
            "value_num": self.value.num,
            "value_log2_den": self.value.log2_den,
            "value_decimal": self.value.decimal(),
            "k": self.witness_k,
            "pattern": str(self.witness_pattern) if self.witness_pattern else None,
            "M": self.witness_m,
            "T": self.witness_t,
            "per_k": [
                {
                    "k": k,
                    "num": v.num,
                    "log2_den": v.log2_den,
                    "decimal": v.decimal(),
                }
                for k, v in self.per_k_max
            ],
        }


def count_occurrences(seq: BitSequence, m: int, pattern: Pattern) -> int:
    """Number of windows among the first m that equal the pattern.

    Counts positions n with 0 <= n < m whose k-window (e_{n+1},...,e_{n+k})
    equals the pattern; requires 1 <= m <= N+1-k so every window fits.
    """
    n = len(seq)
    k = pattern.k
    if k > n:
        raise ValueError(f"pattern length {k} exceeds sequence length {n}")
    if not 1 <= m <= n + 1 - k:
        raise ValueError(f"M={m} outside [1, {n + 1 - k}]")
    mask = (1 << k) - 1
    code = 0
    for i in range(k - 1):
        code = (code << 1) | seq[i]
    count = 0
    for i in range(m):
        code = ((code << 1) | seq[i + k - 1]) & mask
        if code == pattern.value:
            count += 1
    return count


def _empty_report(n: int) -> NormalityReport:
    return NormalityReport(
        n=n,
        value=ExactValue(0),
        witness_k=None,
        witness_pattern=None,
        witness_m=None,
        witness_t=None,
        per_k_max=(),
    )


def _code_dtype(n: int):
    """Window codes are < 2^floor(log2 n) <= n, so int32 covers n < 2^31."""
    return np.int32 if n < (1 << 31) else np.int64


def _extend_codes(codes: np.ndarray, bits: np.ndarray, k: int) -> np.ndarray:
    """Window codes for length k from the codes for length k-1."""
    n = bits.shape[0]
    width = n + 1 - k
    return (codes[:width] << 1) | bits[k - 1 : k - 1 + width]


def _better(cand_num: int, cand_k: int, best_num: int, best_k: int) -> bool:
    """Exact comparison cand_num/2^cand_k > best_num/2^best_k."""
    return (cand_num << best_k) > (best_num << cand_k)


# -- definitional oracle -----------------------------------------------


def normality_naive(seq: BitSequence) -> NormalityReport:
    """Reference evaluator: enumerates every pattern and takes cumulative
    counts over M directly from the definition."""
    n = len(seq)
    klim = max_block_length(n)
    if klim < 1:
        return _empty_report(n)
    bits = seq.to_numpy().astype(_code_dtype(n))
    best: Optional[tuple[int, int, int, int, int]] = None  # num, k, x, m, t
    per_k: list[tuple[int, ExactValue]] = []
    # Scaled deviations are bounded by n << klim.
    dt = np.int32 if (n << klim) < (1 << 31) else np.int64
    codes = bits.copy()
    for k in range(1, klim + 1):
        if k > 1:
            codes = _extend_codes(codes, bits, k)
        width = n + 1 - k
        marr = np.arange(1, width + 1, dtype=dt)
        npat = 1 << k
        # Chunk the pattern axis to bound the (patterns x M) work matrix.
        chunk = max(1, min(npat, (1 << 21) // width))
        k_best: Optional[tuple[int, int, int, int]] = None  # num, x, m, t
        for x0 in range(0, npat, chunk):
            xs = np.arange(x0, min(x0 + chunk, npat), dtype=codes.dtype)
            t = np.cumsum(codes[None, :] == xs[:, None], axis=1, dtype=dt)
            dev = np.abs((t << k) - marr[None, :])
            maxs = dev.max(axis=1)
            arg = dev.argmax(axis=1)
            for j in range(xs.shape[0]):
                num = int(maxs[j])
                if k_best is None or num > k_best[0]:
                    mi = int(arg[j])
                    k_best = (num, x0 + j, mi + 1, int(t[j, mi]))
        assert k_best is not None
        per_k.append((k, ExactValue(k_best[0], k)))
        if best is None or _better(k_best[0], k, best[0], best[1]):
            best = (k_best[0], k, k_best[1], k_best[2], k_best[3])
    num, k, x, m, t = best
    return NormalityReport(
        n=n,
        value=ExactValue(num, k),
        witness_k=k,
        witness_pattern=Pattern(k, x),
        witness_m=m,
        witness_t=t,
        per_k_max=tuple(per_k),
    )


# -- single-pass evaluator ---------------------------------------------


def _occurrence_ranks(codes: np.ndarray) -> np.ndarray:
    """occ[i] = how many windows among the first i+1 equal the window at i.

    int32 throughout when the sizes allow: the radix sort and gathers are
    memory-bound and the measure's desk scale (N <= 2^30) fits easily.
    """
    m = codes.shape[0]
    it = np.int32 if m < (1 << 31) - 1 else np.int64
    order = np.argsort(codes, kind="stable")
    sc = codes[order]
    new = np.empty(m, dtype=bool)
    new[0] = True
    np.not_equal(sc[1:], sc[:-1], out=new[1:])
    starts = np.flatnonzero(new).astype(it)
    gid = np.cumsum(new, dtype=it)
    gid -= 1
    ranks = np.arange(1, m + 1, dtype=it)
    ranks -= starts[gid]
    occ = np.empty(m, dtype=it)
    occ[order] = ranks
    return occ


def _last_position_by_rank(occ: np.ndarray) -> np.ndarray:
    """lp[v-1] = last 1-based step whose window reaches occurrence rank v.

    Rank values present are exactly 1..max(occ) (every higher rank passes
    through each lower one). Fancy assignment with duplicate indices keeps
    the last write, i.e. the largest step, per rank.
    """
    m = occ.shape[0]
    maxocc = int(occ.max())
    lp = np.zeros(maxocc + 1, dtype=np.int64)
    lp[occ] = np.arange(1, m + 1, dtype=np.int64)
    return lp[1:]


def _min_side_profile(occ: np.ndarray, k: int) -> tuple[int, np.ndarray]:
    """Steps at which the minimum pattern count is about to increase.

    Returns (levels, ends) where for each min-count level v in 0..levels the
    last step holding that level is ends[v]. The min count reaches v+1 only
    once every one of the 2^k patterns has occurred v+1 times.
    """
    m = occ.shape[0]
    full = 1 << k
    if full > m:
        return 0, np.array([m], dtype=np.int64)
    counts = np.bincount(occ)  # counts[v] = #patterns occurring >= v times
    reach = counts[1:] == full
    stop = np.flatnonzero(~reach)
    levels = int(stop[0]) if stop.size else int(reach.size)
    ends = np.empty(levels + 1, dtype=np.int64)
    if levels:
        lp = _last_position_by_rank(occ)
        ends[:levels] = lp[:levels] - 1  # step before the min count moves up
    ends[levels] = m
    return levels, ends


def _scan_k(codes: np.ndarray, k: int) -> int:
    """Maximum scaled deviation max_{X,M} |2^k*T(M,X) - M| for this k."""
    m = codes.shape[0]
    occ = _occurrence_ranks(codes)
    dev = occ.astype(np.int64)
    dev <<= k
    dev -= np.arange(1, m + 1, dtype=np.int64)
    high = int(dev.max())
    levels, ends = _min_side_profile(occ, k)
    low = int((ends - (np.arange(levels + 1, dtype=np.int64) << k)).max())
    return max(high, low)


def _witness_k(codes: np.ndarray, k: int, target: int) -> tuple[int, int, int]:
    """Smallest (pattern value, M) attaining the scaled deviation `target`."""
    m = codes.shape[0]
    occ = _occurrence_ranks(codes)
    pos = np.arange(1, m + 1, dtype=np.int64)
    cands: list[tuple[int, int, int]] = []
    hits = np.flatnonzero(((occ.astype(np.int64) << k) - pos) == target)
    if hits.size:
        j = int(np.lexsort((hits, codes[hits]))[0])
        i = int(hits[j])
        cands.append((int(codes[i]), i + 1, int(occ[i])))
    levels, ends = _min_side_profile(occ, k)
    low_hits = np.flatnonzero(
        (ends - (np.arange(levels + 1, dtype=np.int64) << k)) == target
    )
    for v in low_hits:
        v = int(v)
        step = int(ends[v])
        counts = np.bincount(codes[:step], minlength=1 << k)
        x = int(np.flatnonzero(counts == v)[0])
        cands.append((x, step, v))
    return min(cands)


def normality_fast(seq: BitSequence) -> NormalityReport:
    """Single-pass-per-k evaluator; contract identical to normality_naive."""
    n = len(seq)
    klim = max_block_length(n)
    if klim < 1:
        return _empty_report(n)
    bits = seq.to_numpy().astype(_code_dtype(n))
    per_k: list[tuple[int, ExactValue]] = []
    best_num, best_k = -1, 0
    codes = bits.copy()
    for k in range(1, klim + 1):
        if k > 1:
            codes = _extend_codes(codes, bits, k)
        num = _scan_k(codes, k)
        per_k.append((k, ExactValue(num, k)))
        if best_num < 0 or _better(num, k, best_num, best_k):
            best_num, best_k = num, k
    codes = bits.copy()
    for k in range(2, best_k + 1):
        codes = _extend_codes(codes, bits, k)
    x, m, t = _witness_k(codes, best_k, best_num)
    return NormalityReport(
        n=n,
        value=ExactValue(best_num, best_k),
        witness_k=best_k,
        witness_pattern=Pattern(best_k, x),
        witness_m=m,
        witness_t=t,
        per_k_max=tuple(per_k),
    )
