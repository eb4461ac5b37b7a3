import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lzgame import (
    ConstantForecaster,
    InvalidArgument,
    LDStrategy,
    MarkovForecaster,
    MarkovKernel,
    Word,
    compression_rate,
    divergence_decomposition,
    empirical_kernel,
    exact_capital,
    fisher_statistic,
    ld_capital_exact,
    ld_deficiency,
    r_hat,
    weighted_kl,
    ziv_report,
)
from lzgame.analysis import delta_bound, phrase_stats, report, ziv_delta_bound
from lzgame.core import _count_cyclic
from lzgame.realities import MarkovSampler, make_rng

from conftest import binary_words, w
from strategies_hyp import words


class TestRHat:
    def test_constant_word(self):
        assert r_hat(w("0000"), 1) == 0

    def test_small_example(self):
        assert math.isclose(r_hat(w("110"), 1), math.log(0.25), rel_tol=1e-15)

    def test_matches_empirical_kernel(self):
        for word in binary_words(9, 3):
            for ell in (1, 2):
                M = empirical_kernel(word, ell)
                sym = word.tolist()
                n = len(sym)
                direct = math.fsum(
                    math.log(M.prob(sym[i], [sym[(i - ell + j) % n] for j in range(ell)])) for i in range(n)
                )
                assert abs(r_hat(word, ell) - direct) < 1e-12

    def test_regrouped_by_counts(self):
        for word in binary_words(12, 11):
            for ell in (1, 3):
                T1 = _count_cyclic(word, ell + 1).as_array().reshape(-1, 2).astype(float)
                T = T1.sum(axis=1)
                terms = [c * math.log(c / T[ctx]) for (ctx, b), c in np.ndenumerate(T1) if c]
                assert abs(r_hat(word, ell) - math.fsum(terms)) < 1e-12

    def test_bounds(self):
        with pytest.raises(InvalidArgument):
            r_hat(w("01"), 2)


class TestDecomposition:
    def test_exact_match_has_zero_kl(self):
        word = w("01" * 20)
        M = MarkovKernel(1, 2, [[0.5, 0.5], [0.5, 0.5]])
        assert weighted_kl(word, M, 1) > 0
        M = MarkovKernel(1, 2, [[1e-300, 1.0 - 1e-300], [1.0 - 1e-300, 1e-300]])
        assert abs(weighted_kl(word, M, 1)) < 1e-12

    def test_uniform_row_match(self):
        # every pair occurs once cyclically, so M_hat is uniform
        word = w("0011")
        assert weighted_kl(word, MarkovKernel.uniform(2), 1) == 0

    @given(st.integers(0, 10**6), st.integers(1, 2), st.integers(2, 3), st.integers(0, 2), st.integers(4, 400))
    def test_two_sided_agreement(self, seed, k, A, extra, n):
        rng = make_rng(seed)
        ell = k + extra
        if ell >= n:
            return
        M = MarkovKernel.random(rng, A, k, floor=0.01)
        word = Word(rng.integers(0, A, n), A)
        d = divergence_decomposition(word, M, ell=ell)
        assert d.gap < 1e-9
        assert d.weighted_kl >= -1e-12

    def test_custom_initial_forecaster(self):
        M = MarkovKernel.random(make_rng(1), 2, 2)
        f = MarkovForecaster(M, initial=[[0.9, 0.1], [0.2, 0.8]])
        word = MarkovSampler(M, seed=5).generate(500)
        assert divergence_decomposition(word, M, forecaster=f, ell=3).gap < 1e-9

    def test_order_check(self):
        M = MarkovKernel.random(make_rng(1), 2, 2)
        with pytest.raises(InvalidArgument):
            divergence_decomposition(w("0110"), M, ell=1)


class TestZiv:
    def test_exhaustive_small(self):
        for word in binary_words(11, 2):
            for ell in (1, 2):
                if ell < len(word):
                    assert ziv_report(word, ell).holds()

    def test_single_phrase(self):
        rep = ziv_report(w("00"), 1)
        assert rep.complexity == 1 and math.isfinite(rep.delta_bound)

    def test_bound_shrinks_along_prefixes(self):
        rng = make_rng(0)
        big = Word(rng.integers(0, 2, 1_000_000), 2)
        bounds = [ziv_delta_bound(big[:n], 2) for n in (10**3, 10**4, 10**5, 10**6)]
        assert all(a > b for a, b in zip(bounds, bounds[1:]))

    def test_phrase_histogram_counts_phrases(self, worked_word):
        stats = phrase_stats(worked_word, 1)
        assert sum(stats.histogram.values()) == 6
        # the residue joins the last phrase: 010 + 11
        assert max(m for m, _ in stats.histogram) == 5

    def test_exact_entropy_below_bound(self):
        rng = make_rng(7)
        for n in (50, 500, 5000):
            word = Word(rng.integers(0, 3, n), 3)
            rep = ziv_report(word, 1)
            assert rep.delta_exact <= rep.delta_bound

    def test_delta_bound_formula(self):
        c, n = 6, 13
        x = c / n
        expected = x * math.log(n / c) + (1 + x) * math.log(1 + x) + x * 2 * math.log(2)
        assert math.isclose(delta_bound(c, n, 2, 2), expected)


class TestLD:
    def test_skewed_type_grows(self):
        d = [ld_deficiency(Word([1] * n, 2), [0.5, 0.5]) for n in (10, 100, 1000)]
        assert 0 < d[0] < d[1] < d[2]

    def test_balanced_type_declines(self):
        d = [ld_deficiency(Word([0, 1] * (n // 2), 2), [0.5, 0.5]) for n in (10, 100, 1000, 10000)]
        assert d[0] > d[1] > d[2] > d[3]
        # -(A-1)/2 log_A n + O(1)
        slope = (d[3] - d[2]) / math.log2(10)
        assert abs(slope + 0.5) < 0.01

    def test_single_symbol(self):
        p = [0.3, 0.7]
        # (A-1)! 1! / (p(w) A!) = 1 / (A p(w))
        assert math.isclose(ld_deficiency(w("1"), p), math.log(1 / (2 * 0.7), 2))

    def test_matches_strategy_capital(self):
        p = (Fraction(1, 3), Fraction(2, 3))
        for word in binary_words(8):
            K = exact_capital(ConstantForecaster(p), LDStrategy(2, exact=True), word)
            assert K == ld_capital_exact(word, p)
            if len(word):
                assert math.isclose(math.log(K, 2), ld_deficiency(word, p), abs_tol=1e-12)

    def test_rejects_bad_p(self):
        with pytest.raises(InvalidArgument):
            ld_deficiency(w("01"), [1.0, 0.0])


class TestFisher:
    def test_balanced_is_zero(self):
        assert fisher_statistic(w("1100"), [0.5, 0.5]) == 0

    def test_needs_two_symbols(self):
        with pytest.raises(InvalidArgument):
            fisher_statistic(w("1"), [0.5, 0.5])

    def test_threshold_behavior(self):
        # bias sqrt(2 ln n / n) puts the statistic near 4 > A-1, and LD capital climbs
        n = 10_000
        bias = math.sqrt(2 * math.log(n) / n)
        ones = int(round(n * (0.5 + bias)))
        word = Word([1] * ones + [0] * (n - ones), 2)
        assert fisher_statistic(word, [0.5, 0.5]) > 1
        assert ld_deficiency(word, [0.5, 0.5]) > 0
        fair = Word([0, 1] * (n // 2), 2)
        assert fisher_statistic(fair, [0.5, 0.5]) < 1 and ld_deficiency(fair, [0.5, 0.5]) < 0


class TestCompression:
    def test_empty(self):
        assert compression_rate(Word([], 2)) == 0

    def test_periodic_rate_vanishes(self):
        r = [compression_rate(Word([0, 1] * (n // 2), 2)) for n in (10**3, 10**4, 10**5)]
        assert r[0] > r[1] > r[2]
        assert r[2] < r[0] / 4


def test_report_keys(worked_word):
    out = report(worked_word, ell=1, kernel=MarkovKernel.uniform(2))
    assert {"c", "v_size", "rate", "decomposition", "delta_bound", "deficiency", "fisher"} <= set(out)
    assert out["c"] == 6 and out["v_size"] == 8
