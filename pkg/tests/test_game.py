import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lzgame import (
    ConstantForecaster,
    InvalidArgument,
    LDStrategy,
    LZStrategy,
    MarkovForecaster,
    MarkovKernel,
    NoBet,
    PrudenceViolation,
    RestartWrapper,
    SzilardConfig,
    UnsupportedProtocol,
    Word,
    log_q_lz,
    run,
    step,
    stationary,
    szilard_work,
)
from lzgame.game import GameState
from lzgame.realities import MarkovSampler, Periodic, Replay, make_rng

from strategies_hyp import words


class TestStep:
    def test_zero_bet(self):
        s = step(GameState(), (0.3, 0.7), (0.0, 0.0), 1)
        assert s.log_capital == 0 and s.n == 1 and s.history == [1]

    def test_canonical_bet_ratio(self):
        p, Q = (0.4, 0.6), (0.1, 0.9)
        for o in range(2):
            s = step(GameState(), p, tuple(q / pp for q, pp in zip(Q, p)), o)
            assert math.isclose(math.exp(s.log_capital), Q[o] / p[o], rel_tol=1e-15)

    def test_imprudent_bet_aborts(self):
        with pytest.raises(PrudenceViolation):
            step(GameState(), (0.5, 0.5), (0.0, 2.0), 0)


class TestForecasters:
    def test_markov_uses_last_k_only(self):
        M = MarkovKernel.random(make_rng(2), 3, 2)
        f = MarkovForecaster(M)
        rng = np.random.default_rng(0)
        for _ in range(50):
            h1 = rng.integers(0, 3, rng.integers(2, 20)).tolist()
            h2 = rng.integers(0, 3, rng.integers(0, 20)).tolist() + h1[-2:]
            assert f.forecast(h1) == f.forecast(h2)

    def test_default_initial_is_stationary_marginal(self):
        M = MarkovKernel(1, 2, [[0.7, 0.3], [0.1, 0.9]])
        f = MarkovForecaster(M)
        assert np.allclose(f.forecast([]), [0.25, 0.75], atol=1e-12)

    def test_custom_initial(self):
        M = MarkovKernel.random(make_rng(0), 2, 2)
        f = MarkovForecaster(M, initial=[[0.1, 0.9], [0.6, 0.4]])
        assert f.forecast([]) == (0.1, 0.9) and f.forecast([1]) == (0.6, 0.4)
        with pytest.raises(InvalidArgument):
            MarkovForecaster(M, initial=[[0.5, 0.5]])

    @given(words(min_len=0, max_len=60, alphabets=(2, 3)), st.integers(0, 1000), st.integers(1, 3))
    def test_vectorized_log_prob(self, word, seed, k):
        M = MarkovKernel.random(make_rng(seed), word.size, k)
        f = MarkovForecaster(M)
        slow = math.fsum(math.log(f.forecast(word.tolist()[:i])[a]) for i, a in enumerate(word.tolist()))
        assert math.isclose(f.log_prob(word), slow, rel_tol=1e-12, abs_tol=1e-12)


class TestRun:
    def test_no_bet(self):
        traj = run(ConstantForecaster([0.2, 0.8]), NoBet(), Periodic([0, 1], 2), 50)
        assert not traj.log_capital.any()

    def test_rejects_empty_horizon(self):
        with pytest.raises(InvalidArgument):
            run(ConstantForecaster([0.5, 0.5]), NoBet(), Periodic([0], 2), 0)

    @pytest.mark.parametrize("k,A", [(1, 2), (2, 3)])
    def test_likelihood_ratio_identity(self, k, A):
        M = MarkovKernel.random(make_rng(k * 10 + A), A, k, floor=0.05)
        f = MarkovForecaster(M)
        traj = run(f, LZStrategy(A), MarkovSampler(M, seed=11), 20_000)
        expected = -log_q_lz(traj.word) - f.log_prob(traj.word)
        assert abs(traj.final_log_capital - expected) < 1e-9

    def test_ld_rejects_markov_forecaster(self):
        M = MarkovKernel(1, 2, [[0.7, 0.3], [0.1, 0.9]])
        with pytest.raises(UnsupportedProtocol):
            run(MarkovForecaster(M), LDStrategy(2), Periodic([0, 1, 1], 2), 10)

    def test_martingale_under_markov_forecaster(self):
        M = MarkovKernel.random(make_rng(5), 2, 2, floor=0.05)
        f = MarkovForecaster(M)
        for n in (1, 4, 8):
            total = math.fsum(
                math.exp(f.log_prob(Word(s, 2)) + run(f, LZStrategy(2), Replay(Word(s, 2)), n).final_log_capital)
                for s in itertools.product((0, 1), repeat=n)
            )
            assert abs(total - 1) < 1e-12

    def test_faithful_rate_small(self):
        M = MarkovKernel(1, 2, [[0.7, 0.3], [0.25, 0.75]])
        traj = run(MarkovForecaster(M), LZStrategy(2), MarkovSampler(M, seed=1), 30_000)
        assert abs(traj.final_log_capital) / 30_000 < 0.05

    def test_restart_reports_banked(self):
        traj = run(ConstantForecaster([0.5, 0.5]), RestartWrapper(LZStrategy(2)), Periodic([0], 2), 300)
        total = traj.total_log_capital()
        assert np.allclose(np.exp(total), traj.banked + np.exp(traj.log_capital))


class TestSzilard:
    def test_config_validation(self):
        with pytest.raises(InvalidArgument):
            SzilardConfig((1.0,))
        with pytest.raises(InvalidArgument):
            SzilardConfig((1.0, -1.0))
        assert SzilardConfig((1.0, 3.0)).r == 0.75
        with pytest.raises(InvalidArgument):
            SzilardConfig((1.0, 1.0, 1.0)).r

    def test_symmetric_no_bet_is_zero(self):
        cfg = SzilardConfig((0.5, 0.5))
        traj = run(ConstantForecaster(cfg.probabilities), NoBet(), Periodic([0, 1, 1], 2), 200)
        ledger = szilard_work(traj, cfg)
        assert (ledger.delta_work == 0.0).all()
        assert np.array_equal(ledger.masses[:, 0], ledger.masses[:, 1])

    @pytest.mark.parametrize("lengths", [(0.3, 0.7), (1.0, 1.0), (0.2, 0.5, 0.3), (1, 1, 1, 2)])
    def test_work_tracks_capital(self, lengths):
        cfg = SzilardConfig(lengths, g=9.81, unit_capital_to_energy=2.5)
        A = len(lengths)
        M = MarkovKernel.random(make_rng(A), A, 1, floor=0.05)
        traj = run(ConstantForecaster(cfg.probabilities), LZStrategy(A), MarkovSampler(M, seed=3), 3000)
        ledger = szilard_work(traj, cfg)
        # relative error of W against scale * K, taken in logs so it survives overflow
        rel = np.expm1(np.abs(ledger.log_work - math.log(2.5) - traj.log_capital))
        assert rel.max() < 1e-9
        dlogK = np.diff(np.concatenate([[0.0], traj.log_capital]))
        log_prev = np.concatenate([[math.log(2.5)], ledger.log_work[:-1]])
        moved = dlogK != 0
        assert np.array_equal(np.sign(ledger.delta_work[moved]), np.sign(dlogK[moved]))
        # rounds where Q(w) = p(w) exactly: the engine sum cancels to roundoff
        still = ~moved & (log_prev < 700)
        assert np.all(np.abs(ledger.delta_work[still]) < 1e-12 * np.exp(log_prev[still]))

    def test_three_chamber_expressions(self):
        l1, l2, l3 = 0.2, 0.5, 0.3
        cfg = SzilardConfig((l1, l2, l3), g=9.8)
        traj = run(ConstantForecaster(cfg.probabilities), LZStrategy(3), Periodic([0, 1, 2, 2, 0], 3), 40)
        ledger = szilard_work(traj, cfg)
        g = 9.8
        for i in range(40):
            m = ledger.masses[i]
            o = int(traj.outcomes[i])
            by_chamber = [
                m[0] * g * (l2 + l3) / 2 - m[1] * g * l2 / 2 - m[2] * g * l3 / 2,
                m[1] * g * (l3 + l1) / 2 - m[2] * g * l3 / 2 - m[0] * g * l1 / 2,
                m[2] * g * (l1 + l2) / 2 - m[0] * g * l1 / 2 - m[1] * g * l2 / 2,
            ]
            assert math.isclose(ledger.delta_work[i], by_chamber[o], rel_tol=1e-9, abs_tol=1e-12)

    def test_binary_update_rule(self):
        cfg = SzilardConfig((1.0, 3.0), g=9.8)
        traj = run(ConstantForecaster(cfg.probabilities), LDStrategy(2), Periodic([1, 1, 0], 2), 30)
        ledger = szilard_work(traj, cfg)
        W = 1.0
        for i in range(30):
            m = ledger.masses[i]
            dW = (m[1] - m[0]) * 9.8 * 4.0 * (traj.outcomes[i] - cfg.r)
            assert math.isclose(ledger.delta_work[i], dW, rel_tol=1e-12, abs_tol=1e-15)
            W += dW
            assert math.isclose(ledger.work[i], W, rel_tol=1e-9)

    def test_all_zeros_extracts_unbounded_work(self):
        cfg = SzilardConfig((1.0, 1.0))
        traj = run(ConstantForecaster(cfg.probabilities), LZStrategy(2), Periodic([0], 2), 5000)
        ledger = szilard_work(traj, cfg)
        assert ledger.log_work[-1] > 500
        assert np.isinf(ledger.work[-1]) or ledger.work[-1] > 1e200

    def test_requires_matching_forecast(self):
        cfg = SzilardConfig((1.0, 2.0))
        traj = run(ConstantForecaster([0.5, 0.5]), LZStrategy(2), Periodic([0], 2), 10)
        with pytest.raises(UnsupportedProtocol):
            szilard_work(traj, cfg)
        traj = run(ConstantForecaster([0.5, 0.5]), RestartWrapper(LZStrategy(2)), Periodic([0], 2), 50)
        with pytest.raises(UnsupportedProtocol):
            szilard_work(traj, SzilardConfig((1.0, 1.0)))
