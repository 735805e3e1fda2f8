import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurstci import quadvar
from hurstci.errors import DomainError
from hurstci.fbm_sim import PathSample, sample_fbm, sample_fbm_batch
from hurstci.quadvar import (
    rho,
    rho_abs_sum,
    rho_tail_coefficient_check,
    s_n,
    second_differences,
    z_n,
)

from oracles import abs_sum_mp, rho_longdouble, rho_mp, second_differences_loop

H_GRID = [round(0.01 * k, 2) for k in range(1, 100)]


class TestSecondDifferences:
    def test_linear_path_vanishes(self):
        p = PathSample(3, [0, 1 / 3, 2 / 3, 1, 4 / 3])
        np.testing.assert_allclose(second_differences(p).x, 0.0, atol=1e-15)
        assert s_n(p) == pytest.approx(0.0, abs=1e-30)

    def test_spike(self):
        p = PathSample(3, [0, 0, 1, 0, 0])
        assert second_differences(p).x.tolist() == [1.0, -2.0, 1.0]
        assert s_n(p) == 6.0

    @pytest.mark.parametrize("a", [0.5, -3.0, 7.25])
    def test_alternating(self, a):
        p = PathSample(3, [0, a, 0, a, 0])
        assert second_differences(p).x.tolist() == [-2 * a, 2 * a, -2 * a]

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=60))
    def test_matches_loop_and_s_n_is_sum_of_squares(self, tail):
        values = np.array([0.0] + tail)
        p = PathSample(len(values) - 2, values)
        x = second_differences(p).x
        np.testing.assert_allclose(x, second_differences_loop(values), rtol=0, atol=1e-9)
        assert s_n(p) == pytest.approx(float(np.dot(x, x)), rel=1e-12, abs=1e-12)
        assert s_n(p) >= 0.0


def test_s_n_brownian_near_limit():
    n = 2**14
    assert 1.8 <= s_n(sample_fbm(0.5, n, 4)) <= 2.2


class TestZn:
    def test_zero_at_limit(self):
        # a path with S_n exactly on its limit: scale a spike to the right energy
        H, n = 0.3, 50
        target = (4 - 4**H) * n ** (1 - 2 * H)
        values = np.zeros(n + 2)
        values[2] = math.sqrt(target / 6.0)
        p = PathSample(n, values)
        assert z_n(p, H) == pytest.approx(0.0, abs=1e-12)

    def test_direct_arithmetic(self):
        # n = 4, S_4 = 6: 2*6 - 2*2
        p = PathSample(4, [0, 0, 1, 0, 0, 0])
        assert s_n(p) == 6.0
        assert z_n(p, 0.5) == pytest.approx(8.0, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            z_n(PathSample(2, [0, 1, 2, 3]), 1.0)

    def test_centred(self):
        n, m = 2**12, 1000
        paths = sample_fbm_batch(0.5, n, range(m))
        z = [z_n(PathSample(n, v), 0.5) for v in paths]
        assert abs(np.mean(z)) <= 4 * np.std(z, ddof=1) / math.sqrt(m)


class TestRho:
    @pytest.mark.parametrize("H", [0.01, 0.3, 0.5, 0.7, 0.99])
    def test_lag_zero(self, H):
        assert rho(H, 0) == pytest.approx(4 - 4**H, rel=1e-14)

    def test_brownian_two_dependent(self):
        assert rho(0.5, 1) == pytest.approx(-1.0, abs=1e-15)
        assert rho(0.5, 2) == pytest.approx(0.0, abs=1e-15)
        assert rho(0.5, 3) == pytest.approx(0.0, abs=1e-15)

    def test_extended_precision_probe(self):
        assert rho(0.7, 5) == pytest.approx(float(rho_mp(0.7, 5)), rel=1e-12)

    @pytest.mark.parametrize("H", [0.05, 0.37, 0.51, 0.83, 0.97])
    @pytest.mark.parametrize("r", [0, 1, 2, 3, 4, 9, 17, 64, 500, 9999])
    def test_matches_mpmath(self, H, r):
        expected = float(rho_mp(H, r))
        assert rho(H, r) == pytest.approx(expected, rel=1e-11, abs=1e-300)

    def test_even(self):
        r = np.arange(0, 300)
        for H in (0.2, 0.8):
            assert np.array_equal(rho(H, r), rho(H, -r))

    def test_dense_lag_zero_grid(self):
        for H in np.linspace(0.001, 0.999, 999):
            with mp.workdps(40):
                exact = float(4 - mp.mpf(4) ** mp.mpf(H))
            assert abs(rho(H, 0) - exact) <= 1e-14 * exact

    def test_vector_and_scalar_agree(self):
        r = np.array([[0, 5], [-7, 100]])
        out = rho(0.42, r)
        assert out.shape == (2, 2)
        assert out[1, 0] == rho(0.42, -7)


class TestAbsSum:
    def test_brownian(self):
        assert rho_abs_sum(0.5) == pytest.approx(4.0, abs=1e-12)

    def test_refinement(self):
        a = rho_abs_sum(0.75, 1e-6, radius=1000)
        b = rho_abs_sum(0.75, 1e-6, radius=2000)
        assert abs(a - b) <= 1e-6

    @pytest.mark.parametrize("H", [0.03, 0.25, 0.66, 0.98])
    def test_bracketed_by_extended_precision_sum(self, H):
        # a direct sum to R, plus the certified tail, brackets the truth
        R = 2000
        direct = float(abs(rho_mp(H, 0)) + 2 * abs_sum_mp(H, 1, R))
        got = rho_abs_sum(H, 1e-8)
        assert direct <= got + 1e-12
        assert got <= direct + quadvar.certified_tail_bound(H, R) + 1e-12

    def test_sum_bound_over_grid(self):
        for H in H_GRID:
            assert rho_abs_sum(H, 1e-8) <= 17.75

    def test_tol_domain(self):
        with pytest.raises(DomainError):
            rho_abs_sum(0.5, 0.0)


class TestTail:
    @pytest.mark.parametrize("H", [0.1, 0.45, 0.9])
    @pytest.mark.parametrize("R", [2, 3, 50, 1000])
    def test_telescoped_tail_bracketed(self, H, R):
        # sum over R < |r| <= M, plus the certified remainder beyond M
        M = R + 2000
        direct = 2 * float(abs_sum_mp(H, R + 1, M))
        got = quadvar.rho_tail_sum(H, R)
        assert direct <= got * (1 + 1e-9) + 1e-15
        assert got <= direct + quadvar.certified_tail_bound(H, M) + 1e-15

    @pytest.mark.parametrize("H", [0.01, 0.5, 0.99])
    @pytest.mark.parametrize("R", [3, 10, 1000])
    def test_certified_bound_is_below_coarse_bound(self, H, R):
        b = quadvar.certified_tail_bound(H, R)
        assert 0 <= quadvar.rho_tail_sum(H, R) <= b <= (243 / 10) / R

    def test_table(self):
        t = quadvar.autocovariance_table(0.3, 50)
        assert t.values[0] == pytest.approx(4 - 4**0.3, rel=1e-15)
        assert 0 <= t.tail_bound <= 24.3 / 50
        assert t.abs_sum == pytest.approx(rho_abs_sum(0.3), rel=1e-12)
        with pytest.raises(DomainError):
            quadvar.autocovariance_table(0.3, 2)


class TestPerTermBound:
    def test_examples(self):
        assert rho_tail_coefficient_check(0.5, 3)
        assert rho_tail_coefficient_check(0.9, 3)

    def test_below_three_rejected(self):
        with pytest.raises(DomainError):
            rho_tail_coefficient_check(0.5, 2)

    def test_sweep_against_long_double_oracle(self):
        r = np.arange(3, 10_001)
        for H in H_GRID:
            lhs = np.abs(rho_longdouble(H, r))
            rhs = 12.15 * r.astype(np.longdouble) ** (2 * np.longdouble(H) - 4)
            assert np.all(lhs <= rhs)
            assert np.all(rhs <= 12.15 * r.astype(np.longdouble) ** -2.0)
            assert quadvar.per_term_violations(H, 10_000) == 0


@pytest.mark.slow
def test_normalised_statistic_converges():
    for H in (0.3, 0.5, 0.7):
        med = {}
        for n in (2**8, 2**14):
            paths = sample_fbm_batch(H, n, range(100))
            dev = [abs(quadvar.normalized_s_n(PathSample(n, v), H) - (4 - 4**H)) for v in paths]
            med[n] = float(np.median(dev))
        assert med[2**14] < med[2**8]
        assert med[2**14] < 0.1
