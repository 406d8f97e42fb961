"""Exact extreme and star discrepancy of finite point multisets in [0,1).

The deviation of a half-open interval [a,b) against points y_1..y_N is
|#{n: y_n in [a,b)}/N - (b-a)|. With the strict counting function
C(t) = #{n: y_n < t} and g(t) = C(t)/N - t, the interval count is exactly
C(b) - C(a), so the deviation is |g(b) - g(a)| and the extreme discrepancy
is (sup g) - (inf g). Between point values g falls with slope -1 and it
jumps up by mult(v)/N just past each value v (C is left-continuous), so

* sup g is approached among the right-sided limits (C(v)+mult(v))/N - v
  and the boundary values g(0) = g(1) = 0, and
* inf g is attained among the values g(v) = C(v)/N - v and the boundaries.

Suprema reached only in the limit correspond to intervals closing onto a
point; witness endpoints carry a "left-limit" / "right-limit" annotation
("left-limit" equals the attained value since g is left-continuous).

Discrepancies of N points have denominators dividing N * lcm(point
denominators), which is generally not a power of two, so this module works
in Fraction space; the dyadic-points fast paths carry scaled integers and
convert at the end.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .bitcore import ExactValue, decimal_str

__all__ = [
    "PointSet",
    "DiscrepancyReport",
    "PhiEnvelope",
    "extreme_discrepancy",
    "extreme_discrepancy_reference",
    "prefix_discrepancies",
    "phi_envelope",
    "parse_points_file",
    "LEFT_LIMIT",
    "RIGHT_LIMIT",
]

LEFT_LIMIT = "left-limit"
RIGHT_LIMIT = "right-limit"

PointLike = Union[Fraction, ExactValue, int]


def _as_fraction(value: PointLike) -> Fraction:
    if isinstance(value, ExactValue):
        return value.as_fraction()
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class PointSet:
    """Finite multiset of exact points in [0,1), kept in arrival order.

    Orbit pipelines construct point sets from integer numerators over a
    shared denominator 2^w (``from_dyadic``); those keep a packed integer
    view that the fast prefix engine consumes. Arbitrary exact rationals
    are accepted too and are handled by the Fraction paths.
    """

    def __init__(self, values: Iterable[PointLike]):
        fracs = []
        for v in values:
            f = _as_fraction(v)
            if not 0 <= f < 1:
                raise ValueError(f"point {f} outside [0, 1)")
            fracs.append(f)
        self._fracs: Optional[tuple[Fraction, ...]] = tuple(fracs)
        self._nums: Optional[np.ndarray] = None
        self._log2_den: Optional[int] = None
        self._size = len(fracs)
        self._dyadic_checked = False

    @classmethod
    def from_dyadic(cls, numerators, log2_den: int) -> "PointSet":
        if not 0 <= log2_den <= 64:
            raise ValueError(f"log2_den {log2_den} outside [0, 64]")
        nums = np.ascontiguousarray(numerators, dtype=np.uint64)
        if nums.ndim != 1:
            raise ValueError("numerators must be one-dimensional")
        if log2_den < 64 and nums.size and int(nums.max()) >= (1 << log2_den):
            raise ValueError(f"numerator >= 2^{log2_den}")
        ps = cls.__new__(cls)
        ps._fracs = None
        ps._nums = nums
        ps._log2_den = log2_den
        ps._size = int(nums.size)
        ps._dyadic_checked = True
        return ps

    @property
    def size(self) -> int:
        return self._size

    @property
    def values(self) -> tuple[Fraction, ...]:
        if self._fracs is None:
            den = 1 << self._log2_den
            self._fracs = tuple(
                Fraction(int(a), den) for a in self._nums.tolist()
            )
        return self._fracs

    def dyadic_view(self) -> Optional[tuple[np.ndarray, int]]:
        """(numerators, w) over a common denominator 2^w, if one exists."""
        if self._nums is None and not self._dyadic_checked:
            self._dyadic_checked = True
            w = 0
            for f in self._fracs:
                den = f.denominator
                if den & (den - 1):
                    return None
                w = max(w, den.bit_length() - 1)
            if w <= 64:
                nums = np.array(
                    [
                        f.numerator << (w - (f.denominator.bit_length() - 1))
                        for f in self._fracs
                    ],
                    dtype=np.uint64,
                )
                self._nums = nums
                self._log2_den = w
        if self._nums is None:
            return None
        return self._nums, self._log2_den

    def prefix(self, m: int) -> "PointSet":
        if not 0 <= m <= self._size:
            raise ValueError(f"prefix length {m} outside [0, {self._size}]")
        if self._nums is not None:
            return PointSet.from_dyadic(self._nums[:m], self._log2_den)
        return PointSet(self._fracs[:m])

    def __len__(self) -> int:
        return self._size


@dataclass(frozen=True)
class DiscrepancyReport:
    """Extreme and star discrepancy with the witness interval [a, b).

    Endpoint sides say how the supremum is realized: "left-limit" places
    the boundary exactly at the endpoint value (the attained evaluation),
    "right-limit" means the boundary approaches from just above, i.e. the
    interval closes onto the point from the right.
    """

    n: int
    extreme: Fraction
    star: Fraction
    witness_a: Fraction
    witness_a_side: str
    witness_b: Fraction
    witness_b_side: str

    def to_json_dict(self) -> dict:
        def frac_dict(f: Fraction) -> dict:
            return {
                "num": f.numerator,
                "den": f.denominator,
                "decimal": decimal_str(f.numerator, f.denominator),
            }

        return {
            "n": self.n,
            "extreme_num": self.extreme.numerator,
            "extreme_den": self.extreme.denominator,
            "extreme_decimal": decimal_str(
                self.extreme.numerator, self.extreme.denominator
            ),
            "star_num": self.star.numerator,
            "star_den": self.star.denominator,
            "star_decimal": decimal_str(self.star.numerator, self.star.denominator),
            "witness": {
                "a": frac_dict(self.witness_a),
                "b": frac_dict(self.witness_b),
                "a_side": self.witness_a_side,
                "b_side": self.witness_b_side,
            },
        }


@dataclass(frozen=True)
class PhiEnvelope:
    """Minimal nondecreasing envelope with values[M-1] >= M * D_M."""

    values: tuple[Fraction, ...]


def _candidates(values: Sequence[Fraction], n: int):
    """Deviation-function candidates in boundary order.

    Yields (g, location, side) with g the candidate value of the deviation
    function, ordered by boundary position (value, then left before right).
    """
    counter = Counter(values)
    yield Fraction(0), Fraction(0), LEFT_LIMIT  # t = 0
    below = 0
    for v in sorted(counter):
        yield Fraction(below, n) - v, v, LEFT_LIMIT
        below += counter[v]
        yield Fraction(below, n) - v, v, RIGHT_LIMIT
    yield Fraction(0), Fraction(1), LEFT_LIMIT  # t = 1


def extreme_discrepancy(points: PointSet) -> DiscrepancyReport:
    """Exact extreme (and star) discrepancy via the deviation function."""
    n = points.size
    if n == 0:
        raise ValueError("empty point set")
    hi = lo = None  # (g, location, side), first in boundary order
    for cand in _candidates(points.values, n):
        if hi is None or cand[0] > hi[0]:
            hi = cand
        if lo is None or cand[0] < lo[0]:
            lo = cand
    extreme = hi[0] - lo[0]
    star = max(hi[0], -lo[0])
    # Boundary order decides which extremum is the left endpoint.
    lo_key = (lo[1], lo[2] == RIGHT_LIMIT)
    hi_key = (hi[1], hi[2] == RIGHT_LIMIT)
    if lo_key <= hi_key:
        a, b = lo, hi
    else:
        a, b = hi, lo
    return DiscrepancyReport(
        n=n,
        extreme=extreme,
        star=star,
        witness_a=a[1],
        witness_a_side=a[2],
        witness_b=b[1],
        witness_b_side=b[2],
    )


def extreme_discrepancy_reference(points: PointSet) -> Fraction:
    """Ground-truth oracle: brute enumeration over all pairs of critical
    endpoints (each distinct value from either side, plus 0 and 1)."""
    n = points.size
    if n == 0:
        raise ValueError("empty point set")
    values = points.values
    den = math.lcm(*(f.denominator for f in values))
    counter = Counter(f.numerator * (den // f.denominator) for f in values)
    locs = [0]
    cnts = [0]
    below = 0
    for v in sorted(counter):
        locs.append(v)  # boundary at the value
        cnts.append(below)
        below += counter[v]
        locs.append(v)  # boundary just past the value
        cnts.append(below)
    locs.append(den)
    cnts.append(n)
    if n * den < (1 << 62):
        la = np.asarray(locs, dtype=np.int64)
        ca = np.asarray(cnts, dtype=np.int64)
        dev = np.abs(
            (ca[None, :] - ca[:, None]) * den - (la[None, :] - la[:, None]) * n
        )
        best = int(dev.max())
    else:
        best = 0
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                d = abs((cnts[j] - cnts[i]) * den - (locs[j] - locs[i]) * n)
                if d > best:
                    best = d
    return Fraction(best, n * den)


# -- all-prefix engine ---------------------------------------------------


def _insert_sorted(buf: np.ndarray, m: int, value) -> None:
    """Insert value into the sorted buf[:m], shifting the tail right."""
    pos = int(np.searchsorted(buf[:m], value))
    if pos < m:
        buf[pos + 1 : m + 1] = buf[pos:m].copy()
    buf[pos] = value


def _prefix_dev_numerators_small(nums: np.ndarray, w: int) -> list[int]:
    """Per-prefix integer 2^w * M * D_M for w <= 31 (single int64 limb)."""
    n = int(nums.size)
    a = nums.astype(np.int64)
    iw = np.arange(1, n + 1, dtype=np.int64) << w
    buf = np.empty(n, dtype=np.int64)
    scratch = np.empty(n, dtype=np.int64)
    one = 1 << w
    out = []
    for m in range(1, n + 1):
        _insert_sorted(buf, m - 1, a[m - 1])
        f = scratch[:m]
        np.multiply(buf[:m], m, out=f)
        np.subtract(iw[:m], f, out=f)
        fmax = int(f.max())
        fmin = int(f.min())
        out.append(max(0, fmax) + max(0, one - fmin))
    return out


def _prefix_dev_numerators_wide(nums: np.ndarray, w: int) -> list[int]:
    """Per-prefix integer 2^w * M * D_M for 32 <= w <= 64.

    The rank expressions i*2^w - M*a_(i) need up to w + log2(N) bits, so
    they are carried as two int64 limbs over base 2^32 in canonical form
    (hi*2^32 + lo with 0 <= lo < 2^32); the extreme is found by maximizing
    the high limb and then the low limb among its holders.
    """
    n = int(nums.size)
    buf = np.empty(n, dtype=np.uint64)
    iw = np.arange(1, n + 1, dtype=np.int64) * (1 << (w - 32))
    mask = np.uint64(0xFFFFFFFF)
    one = 1 << w
    out = []
    for m in range(1, n + 1):
        _insert_sorted(buf, m - 1, nums[m - 1])
        u = buf[:m]
        ah = (u >> np.uint64(32)).astype(np.int64)
        al = (u & mask).astype(np.int64)
        hi = iw[:m] - m * ah  # A limb before borrow
        b = m * al
        borrow = (b + 0xFFFFFFFF) >> 32
        hi -= borrow
        lo = (borrow << 32) - b
        h = int(hi.max())
        fmax = (h << 32) + int(lo[hi == h].max())
        h = int(hi.min())
        fmin = (h << 32) + int(lo[hi == h].min())
        out.append(max(0, fmax) + max(0, one - fmin))
    return out


def prefix_deviation_numerators(nums: np.ndarray, w: int) -> list[int]:
    """For every prefix length M: the integer 2^w * M * D_M.

    M * D_M shares the denominator 2^w for every M, so the running maximum
    of these integers is the scaled envelope of the Lemma-style bound.
    """
    n = int(nums.size)
    if not 0 <= w <= 64:
        raise ValueError(f"w={w} outside [0, 64]")
    if n >= (1 << 26):
        raise ValueError("prefix engine supports at most 2^26 points")
    if w <= 31:
        return _prefix_dev_numerators_small(nums, w)
    return _prefix_dev_numerators_wide(nums, w)


def prefix_discrepancies(points: PointSet) -> list[Fraction]:
    """D_1, ..., D_N where D_M is the extreme discrepancy of the first M
    points in arrival order."""
    n = points.size
    if n == 0:
        raise ValueError("empty point set")
    dy = points.dyadic_view()
    if dy is not None and n < (1 << 26):
        nums, w = dy
        dnums = prefix_deviation_numerators(nums, w)
        den = 1 << w
        return [Fraction(d, (m + 1) * den) for m, d in enumerate(dnums)]
    values = points.values
    return [
        extreme_discrepancy(PointSet(values[:m])).extreme for m in range(1, n + 1)
    ]


def phi_envelope(prefix_ds: Sequence[Union[Fraction, ExactValue]]) -> PhiEnvelope:
    """Minimal nondecreasing envelope Phi(M) = max_{m<=M} m * D_m."""
    if not prefix_ds:
        raise ValueError("empty prefix-discrepancy list")
    out = []
    best = Fraction(0)
    for m, d in enumerate(prefix_ds, start=1):
        cand = m * _as_fraction(d)
        if cand > best:
            best = cand
        out.append(best)
    return PhiEnvelope(values=tuple(out))


def parse_points_file(path: str) -> PointSet:
    """Read a point set from a text file of "num/2^w" lines.

    Blank lines and lines starting with '#' are skipped.
    """
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            num_s, sep, den_s = text.partition("/2^")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected num/2^w, got {text!r}")
            try:
                num = int(num_s)
                w = int(den_s)
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: expected num/2^w, got {text!r}"
                ) from None
            if w < 0 or num < 0 or num >= (1 << w):
                raise ValueError(f"{path}:{lineno}: {text!r} is not in [0, 1)")
            values.append(Fraction(num, 1 << w))
    return PointSet(values)
