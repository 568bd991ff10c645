"""Partition lower-bound tests: DP vs exhaustive oracle, exact rational
cross-check, the transcendental constant, and the logarithmic sandwich."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from maxsmooth.bounds import (
    AsymptoticConstants,
    asymptotic_sandwich,
    beta_root,
    gamma,
    gamma_bruteforce,
    gamma_table,
    partition_sum,
    two_term_lower,
)


def enumerate_chains_directly(d):
    """Second independent enumerator (itertools subsets of interior points)."""
    best = -1.0
    for r in range(0, d - 1):
        for mids in itertools.combinations(range(2, d), r):
            seq = (1,) + mids + (d,)
            best = max(best, sum(((b - a) / b) ** 2
                                 for a, b in zip(seq, seq[1:])))
    return best


class TestGamma:
    def test_base_case(self):
        cert = gamma(1)
        assert cert.value == 0.0 and cert.indices == (1,)

    def test_small_closed_forms(self):
        assert gamma(2).value == 0.25
        assert gamma(3).value == (2 / 3) ** 2  # exactly float(4/9)
        assert gamma(3).value == 4 / 9
        assert gamma(4).value == 0.5625
        assert gamma(4).indices == (1, 4)

    @pytest.mark.parametrize("d", range(2, 15))
    def test_matches_bruteforce(self, d):
        assert abs(gamma(d).value - gamma_bruteforce(d)) <= 1e-12

    @pytest.mark.parametrize("d", range(2, 13))
    def test_bruteforce_against_second_enumerator(self, d):
        assert gamma_bruteforce(d) == pytest.approx(
            enumerate_chains_directly(d), abs=1e-13)

    @pytest.mark.parametrize("d", range(2, 13))
    def test_exact_rational_bruteforce(self, d):
        exact = gamma_bruteforce(d, exact=True)
        assert isinstance(exact, Fraction)
        assert abs(float(exact) - gamma(d).value) <= 1e-12

    def test_three_beats_the_refinement(self):
        # chain (1,3) dominates (1,2,3): 4/9 > 1/4 + 1/9
        assert gamma_bruteforce(3) == pytest.approx(4 / 9, abs=1e-15)
        assert 4 / 9 > 0.25 + (1 / 3) ** 2

    def test_certificate_recomputes_to_value(self):
        for d in (2, 7, 50, 300):
            cert = gamma(d)
            assert abs(cert.recompute() - cert.value) <= 1e-12

    def test_tie_break_prefers_smallest_predecessor(self):
        # values are argmax-first over ascending i, so indices are canonical
        g, pred = gamma_table(50)
        for m in range(2, 51):
            t = (m - np.arange(1, m, dtype=float)) / m
            vals = g[1:m] + t * t
            assert pred[m] == 1 + int(np.argmax(vals))

    def test_monotone_nondecreasing(self):
        g, _ = gamma_table(10_000)
        assert np.all(np.diff(g[1:]) >= 0.0)

    def test_within_centered_lse_upper_bound(self):
        for d in range(2, 51):
            val = gamma(d).value
            assert two_term_lower(d) <= val + 1e-15
            assert val <= 0.5 * math.log(d) + 1e-15

    def test_pruned_matches_unpruned(self):
        for d in (50, 500, 5000, 20_000):
            gu, pu = gamma_table(d, pruned=False)
            gp, pp = gamma_table(d, pruned=True)
            assert np.array_equal(gu, gp)
            assert np.array_equal(pu, pp)

    def test_auto_mode_picks_pruned_above_threshold(self):
        cert = gamma(40_000)  # pruned automatically; sanity via sandwich
        lower, upper = asymptotic_sandwich(40_000)
        assert lower - 1e-9 <= cert.value <= upper + 1e-9

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            gamma(0)

    def test_bruteforce_range_checks(self):
        with pytest.raises(ValueError):
            gamma_bruteforce(1)
        with pytest.raises(ValueError):
            gamma_bruteforce(23)
        with pytest.raises(ValueError):
            gamma_bruteforce(13, exact=True)

    def test_partition_sum_validates_chain(self):
        with pytest.raises(ValueError):
            partition_sum((2, 4))
        with pytest.raises(ValueError):
            partition_sum((1, 3, 3))


class TestBetaRoot:
    def test_defining_equation_residual(self):
        c = beta_root(1e-10)
        assert abs(2 * c.beta * math.log(c.beta) - c.beta + 1) <= 1e-9

    def test_numeric_values(self):
        c = beta_root(1e-10)
        assert c.beta == pytest.approx(0.28467, abs=5e-6)
        assert c.slope == pytest.approx(0.40726, abs=5e-6)
        assert 0 < c.beta < 1

    def test_slope_definition(self):
        c = beta_root(1e-12)
        assert c.slope == 2 * c.beta * (1 - c.beta)
        assert isinstance(c, AsymptoticConstants)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            beta_root(0.0)


class TestSandwich:
    def test_degenerate_dimension(self):
        lower, upper = asymptotic_sandwich(1)
        assert lower == 0.0 and upper == 0.0

    @pytest.mark.parametrize("d", [2, 10, 100, 1000])
    def test_containment(self, d):
        lower, upper = asymptotic_sandwich(d)
        val = gamma(d).value
        assert lower - 1e-9 <= val <= upper + 1e-9

    def test_upper_bound_formula(self):
        slope = beta_root(1e-10).slope
        lower, upper = asymptotic_sandwich(100)
        assert upper == pytest.approx(slope * math.log(100), abs=1e-15)
        assert upper - lower == pytest.approx(2 * 99 / 100, abs=1e-15)


class TestTwoTermLower:
    def test_values(self):
        assert two_term_lower(2) == 0.25
        assert two_term_lower(1) == 0.0
        assert two_term_lower(4) == 0.5625

    def test_coincides_with_gamma_at_four(self):
        assert two_term_lower(4) == gamma_bruteforce(4)
