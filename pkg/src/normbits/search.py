"""Exhaustive minimization of the normality measure over all length-n
binary sequences, and Monte Carlo scans of its typical size.

The search walks the binary prefix tree depth-first, maintaining for each
admissible block length k the per-pattern occurrence counts, a
count-of-counts histogram giving the minimum count in O(1) amortized, and
the running maximum deviation over the windows settled so far. Deviation
terms already fixed by a prefix lower-bound the measure of every extension
(k is always taken from the *target* length's range), so a branch is cut
once its bound strictly exceeds the incumbent; the strict cut keeps every
minimum-attaining leaf reachable, which makes the reported witness list
complete in lexicographic order up to the cap. With pruning enabled only
sequences starting with 0 are enumerated, since complementing every bit
permutes the patterns of each length and leaves all deviations unchanged.

At a leaf every deviation term is settled, so the bound *is* the exact
measure; no separate evaluation pass is needed.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitcore import BitSequence, ExactValue
from .generators import RANDOM_ALGORITHM, random_bits, sample_seed
from .measure import max_block_length, normality_fast

__all__ = ["SearchResult", "ScanStats", "exhaustive_min", "typical_scan"]

MAX_SEARCH_N = 30

QUANTILE_KEYS = ("min", "p05", "p25", "median", "p75", "p95", "max")
_QUANTILE_LEVELS = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)


@dataclass(frozen=True)
class SearchResult:
    n: int
    min_value: ExactValue
    witnesses: tuple[BitSequence, ...]
    nodes_visited: int
    pruned: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "min_num": self.min_value.num,
            "min_log2_den": self.min_value.log2_den,
            "min_decimal": self.min_value.decimal(),
            "witnesses": [w.to01() for w in self.witnesses],
            "nodes_visited": self.nodes_visited,
            "pruned": self.pruned,
        }


@dataclass(frozen=True)
class ScanStats:
    n: int
    samples: int
    seed: int
    algorithm: str
    quantiles: tuple[float, ...]  # of measure/sqrt(n), keyed by QUANTILE_KEYS

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "quantiles": dict(zip(QUANTILE_KEYS, self.quantiles)),
        }


class _KState:
    """Incremental per-k pass: counts, count histogram, running deviation."""

    __slots__ = ("k", "mask", "counts", "hist", "minc", "maxdev")

    def __init__(self, k: int, n: int):
        self.k = k
        self.mask = (1 << k) - 1
        self.counts = [0] * (1 << k)
        hist = [0] * (n + 2)
        hist[0] = 1 << k
        self.hist = hist
        self.minc = 0
        self.maxdev = 0

    def push(self, window: int, m: int) -> tuple[int, int, int]:
        token = (window, self.minc, self.maxdev)
        c = self.counts[window]
        self.counts[window] = c + 1
        hist = self.hist
        hist[c] -= 1
        hist[c + 1] += 1
        if c == self.minc and hist[c] == 0:
            self.minc = c + 1
        d = ((c + 1) << self.k) - m
        if d > self.maxdev:
            self.maxdev = d
        d = m - (self.minc << self.k)
        if d > self.maxdev:
            self.maxdev = d
        return token

    def pop(self, token: tuple[int, int, int]) -> None:
        window, minc, maxdev = token
        c = self.counts[window] - 1
        self.counts[window] = c
        self.hist[c + 1] -= 1
        self.hist[c] += 1
        self.minc = minc
        self.maxdev = maxdev


class _Incumbent:
    """Monotone-lowering bound shared across subtree tasks."""

    def __init__(self, ceiling: int):
        self.value = ceiling
        self._lock = threading.Lock()

    def lower(self, value: int) -> None:
        with self._lock:
            if value < self.value:
                self.value = value


class _Task:
    """DFS over one subtree; exact arithmetic on the 2^klim denominator."""

    def __init__(self, n: int, klim: int, cap: int, prune: bool, shared: _Incumbent):
        self.n = n
        self.klim = klim
        self.cap = cap
        self.prune = prune
        self.shared = shared
        self.kstates = [_KState(k, n) for k in range(1, klim + 1)]
        self.acc = 0
        self.local_min = (n << klim) + 1
        self.witnesses: list[int] = []
        self.nodes = 0
        self.pruned_count = 0

    def _push(self, bit: int, new_len: int) -> list:
        self.acc = (self.acc << 1) | bit
        self.nodes += 1
        tokens = []
        for st in self.kstates:
            if new_len >= st.k:
                tokens.append(st.push(self.acc & st.mask, new_len - st.k + 1))
            else:
                tokens.append(None)
        return tokens

    def _pop(self, tokens: list) -> None:
        self.acc >>= 1
        for st, token in zip(self.kstates, tokens):
            if token is not None:
                st.pop(token)

    def _bound(self) -> int:
        klim = self.klim
        best = 0
        for st in self.kstates:
            d = st.maxdev << (klim - st.k)
            if d > best:
                best = d
        return best

    def _leaf(self, value: int) -> None:
        if value < self.local_min:
            self.local_min = value
            self.witnesses = [self.acc]
            self.shared.lower(value)
        elif value == self.local_min and len(self.witnesses) < self.cap:
            self.witnesses.append(self.acc)

    def descend(self, length: int) -> None:
        for bit in (0, 1):
            tokens = self._push(bit, length + 1)
            bound = self._bound()
            cut = self.prune and bound > min(self.local_min, self.shared.value)
            if cut:
                self.pruned_count += 1
            elif length + 1 == self.n:
                self._leaf(bound)
            else:
                self.descend(length + 1)
            self._pop(tokens)

    def run_prefix(self, prefix: int, depth: int) -> None:
        """Replay a fixed prefix (MSB-first) and search its subtree."""
        stack = []
        for i in range(depth):
            bit = (prefix >> (depth - 1 - i)) & 1
            tokens = self._push(bit, i + 1)
            stack.append(tokens)
            if self.prune and self._bound() > min(self.local_min, self.shared.value):
                self.pruned_count += 1
                while stack:
                    self._pop(stack.pop())
                return
        if depth == self.n:
            self._leaf(self._bound())
        else:
            self.descend(depth)
        while stack:
            self._pop(stack.pop())


def exhaustive_min(
    n: int,
    cap: int = 16,
    prune: bool = True,
    split_depth: int = 8,
    threads: int = 1,
) -> SearchResult:
    """Exact minimum of the normality measure over {0,1}^n.

    With pruning on, only the e_1 = 0 half is enumerated (complementation
    preserves the measure) and bounded branches are cut; the minimum is
    identical either way. Witnesses are the lexicographically smallest
    minimizers found, at most `cap`, all starting with 0 under pruning
    (each one's complement attains the same value and is not listed).
    """
    if not 1 <= n <= MAX_SEARCH_N:
        raise ValueError(f"n={n} outside [1, {MAX_SEARCH_N}]")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    klim = max_block_length(n)
    shared = _Incumbent((n << klim) + 1)
    depth = min(split_depth, n)
    first_bits = (0,) if prune else (0, 1)
    prefixes = [
        (top << (depth - 1)) | rest
        for top in first_bits
        for rest in range(1 << (depth - 1))
    ]

    def run_one(prefix: int) -> _Task:
        task = _Task(n, klim, cap, prune, shared)
        task.run_prefix(prefix, depth)
        return task

    if threads > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            tasks = list(pool.map(run_one, prefixes))
    else:
        tasks = [run_one(p) for p in prefixes]

    best = min(task.local_min for task in tasks)
    witnesses: list[int] = []
    for task in tasks:  # task order is lexicographic in the prefix
        if task.local_min == best:
            witnesses.extend(task.witnesses)
    witnesses = sorted(witnesses)[:cap]
    return SearchResult(
        n=n,
        min_value=ExactValue(best, klim),
        witnesses=tuple(
            BitSequence.from01(format(w, f"0{n}b")) for w in witnesses
        ),
        nodes_visited=sum(t.nodes for t in tasks),
        pruned=sum(t.pruned_count for t in tasks),
    )


def typical_scan(n: int, samples: int, seed: int) -> ScanStats:
    """Quantiles of measure/sqrt(n) over seeded random sequences.

    Sample i draws its bits from the documented PRNG under the derived
    seed sample_seed(seed, i), so the scan is reproducible from
    (n, samples, seed) alone. Quantiles use numpy's linear interpolation.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    root = math.sqrt(n)
    ratios = np.empty(samples, dtype=np.float64)
    for i in range(samples):
        seq = random_bits(sample_seed(seed, i), n)
        ratios[i] = float(normality_fast(seq).value) / root
    qs = np.quantile(ratios, _QUANTILE_LEVELS)
    return ScanStats(
        n=n,
        samples=samples,
        seed=seed,
        algorithm=RANDOM_ALGORITHM,
        quantiles=tuple(float(q) for q in qs),
    )
