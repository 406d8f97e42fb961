from fractions import Fraction

import pytest

from normbits.bitcore import ExactValue, Pattern
from normbits.discrepancy import (
    PointSet,
    extreme_discrepancy_reference,
    phi_envelope,
)
from normbits.generators import GeneratorSpec
from normbits.measure import count_occurrences, normality_naive
from normbits.orbit import (
    count_via_orbit,
    default_checkpoints,
    lemma1_verify,
    orbit_points,
)


def stream(text: str):
    return GeneratorSpec.parse(text).stream()


class TestOrbitPoints:
    def test_one_third(self):
        pts = orbit_points(stream("rational:1/3"), 2, 8)
        assert pts.values == (Fraction(85, 256), Fraction(170, 256))

    def test_zero_expansion(self):
        pts = orbit_points(stream("rational:0/1"), 5, 8)
        assert all(v == 0 for v in pts.values)

    def test_one_half_shifts(self):
        pts = orbit_points(stream("rational:1/2"), 3, 4)
        assert pts.values == (Fraction(8, 16), Fraction(0), Fraction(0))

    def test_window_agreement(self):
        # points truncated at w and w' agree on the first min(w, w') bits
        s = stream("random:5")
        a, _ = orbit_points(s, 20, 16).dyadic_view()
        b, _ = orbit_points(s, 20, 24).dyadic_view()
        assert (a == (b >> 8)).all()

    def test_window_too_small(self):
        with pytest.raises(ValueError):
            orbit_points(stream("rational:1/3"), 8, 3)  # needs w >= 4

    def test_window_bounds(self):
        with pytest.raises(ValueError):
            orbit_points(stream("rational:1/3"), 4, 65)


class TestCountViaOrbit:
    def test_one_third_example(self):
        assert count_via_orbit(stream("rational:1/3"), 4, Pattern.from01("01"), 16) == 2

    def test_zero_stream(self):
        s = stream("rational:0/1")
        assert count_via_orbit(s, 5, Pattern.from01("00"), 8) == 5
        assert count_via_orbit(s, 5, Pattern.from01("1"), 8) == 0

    def test_pattern_exceeds_window(self):
        with pytest.raises(ValueError):
            count_via_orbit(stream("rational:1/3"), 4, Pattern.from01("0101"), 3)

    def test_bridge_exhaustive_small_k(self):
        # The defining identity: indicator sums over dyadic intervals equal
        # direct pattern counts, for every pattern with k <= 6 and every M.
        for text in ("random:1", "random:2", "champernowne", "rational:5/7"):
            s = stream(text)
            w = 16
            m_top = 24
            digits = s.prefix(m_top + w - 1)
            for k in range(1, 7):
                for value in range(1 << k):
                    pattern = Pattern(k, value)
                    for m in (1, 3, m_top):
                        assert count_via_orbit(s, m, pattern, w) == (
                            count_occurrences(digits, m, pattern)
                        ), (text, k, value, m)


class TestLemma1Verify:
    def test_one_third_checkpoint_exact(self):
        # Frozen expectations recomputed from the module oracles:
        # normality of 01010101 from the naive evaluator, the envelope from
        # the pair-enumeration discrepancy reference on orbit prefixes.
        s = stream("rational:1/3")
        rep = lemma1_verify(s, 8, 16, checkpoints=[8])
        (cp,) = rep.checkpoints
        digits = s.prefix(8)
        assert cp.normality == normality_naive(digits).value
        assert cp.normality == ExactValue(19, 3)
        pts = orbit_points(s, 8, 16)
        ref_ds = [
            extreme_discrepancy_reference(pts.prefix(m)) for m in range(1, 9)
        ]
        expected_phi = phi_envelope(ref_ds).values[-1]
        assert cp.phi == expected_phi
        assert cp.phi == Fraction(43691, 8192)
        assert cp.margin == cp.phi - Fraction(19, 8)
        assert rep.overall_pass

    def test_zero_stream_passes(self):
        for n in (2, 5, 16, 64):
            rep = lemma1_verify(stream("rational:0/1"), n, 16)
            assert rep.overall_pass

    def test_random_streams_pass(self):
        for seed in range(8):
            rep = lemma1_verify(stream(f"random:{seed}"), 256, 16)
            assert rep.overall_pass
            assert [c.n for c in rep.checkpoints] == default_checkpoints(256)
            for c in rep.checkpoints:
                assert c.margin >= 0 and c.passed

    def test_threads_deterministic(self):
        s = stream("random:9")
        a = lemma1_verify(s, 128, 32, threads=1)
        b = lemma1_verify(s, 128, 32, threads=4)
        assert a == b

    def test_explicit_checkpoints_validated(self):
        s = stream("random:3")
        with pytest.raises(ValueError):
            lemma1_verify(s, 16, 16, checkpoints=[0, 4])
        with pytest.raises(ValueError):
            lemma1_verify(s, 16, 16, checkpoints=[20])
        with pytest.raises(ValueError):
            lemma1_verify(s, 16, 16, checkpoints=[])

    def test_default_checkpoints(self):
        assert default_checkpoints(1) == [1]
        assert default_checkpoints(8) == [1, 2, 4, 8]
        assert default_checkpoints(12) == [1, 2, 4, 8, 12]

    def test_report_json_shape(self):
        rep = lemma1_verify(stream("rational:1/3"), 8, 16)
        d = rep.to_json_dict()
        assert d["window_bits"] == 16
        assert d["overall_pass"] is True
        assert [c["n"] for c in d["checkpoints"]] == [1, 2, 4, 8]
        cp = d["checkpoints"][-1]
        assert set(cp) == {"n", "normality", "phi", "margin", "pass"}
        assert cp["normality"]["num"] == 19
