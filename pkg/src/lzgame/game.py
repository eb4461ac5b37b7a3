"""Predictive-game protocols and the Szilard work ledger.

Capital is kept in log domain throughout: ``log_capital`` is the log of
the protocol capital ``K_n`` (the amount still in play). Gains moved out of
play by a restart wrapper accumulate in ``banked``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import InvalidArgument, PrudenceViolation, UnsupportedProtocol, Word, pattern_index, window_indices
from .markov import MarkovKernel, as_distribution, stationary
from .strategies import Strategy, capital_factor


class Forecaster:
    alphabet_size: int

    def forecast(self, history: Sequence[int]) -> tuple[float, ...]:
        raise NotImplementedError

    def log_prob(self, word: Word) -> float:
        """``ln P~(word)``: the product of the announced probabilities."""
        hist = word.tolist()
        return math.fsum(math.log(self.forecast(hist[:i])[a]) for i, a in enumerate(hist))

    @property
    def constant(self) -> bool:
        return False


class ConstantForecaster(Forecaster):
    """Announces the same ``p`` every round (the simple predictive game)."""

    def __init__(self, p: Sequence[float]):
        if all(isinstance(x, Fraction) for x in p):
            if sum(p) != 1 or any(x <= 0 for x in p):
                raise InvalidArgument(f"invalid forecast {p}")
            self.p = tuple(p)
        else:
            self.p = tuple(float(x) for x in as_distribution(p))
        self.alphabet_size = len(self.p)

    def forecast(self, history):
        return self.p

    def log_prob(self, word):
        logs = [math.log(x) for x in self.p]
        counts = np.bincount(word.symbols, minlength=self.alphabet_size)
        return math.fsum(c * l for c, l in zip(counts.tolist(), logs))

    @property
    def constant(self):
        return True


class MarkovForecaster(Forecaster):
    """Announces ``M(. | last k symbols)`` once ``k`` symbols are known.

    The first ``k`` announcements are ``initial[i]`` when given, and
    otherwise the single-symbol marginal of the stationary law.
    """

    def __init__(self, kernel: MarkovKernel, initial: Sequence[Sequence[float]] | None = None):
        self.kernel = kernel
        self.alphabet_size = kernel.alphabet_size
        k = kernel.order
        if initial is None:
            marginal = stationary(kernel).marginal()
            marginal = marginal / marginal.sum()
            initial = [marginal] * k
        if len(initial) != k:
            raise InvalidArgument(f"need {k} initial announcements, got {len(initial)}")
        self.initial = [tuple(float(x) for x in as_distribution(p)) for p in initial]
        self._rows = [tuple(row) for row in kernel.table.tolist()]

    def forecast(self, history):
        n = len(history)
        k = self.kernel.order
        if n < k:
            return self.initial[n]
        return self._rows[pattern_index(history[n - k:], self.alphabet_size)]

    def log_prob(self, word):
        k, A = self.kernel.order, self.alphabet_size
        sym = word.tolist()
        head = [math.log(self.initial[i][a]) for i, a in enumerate(sym[:k])]
        if len(sym) <= k:
            return math.fsum(head)
        idx = window_indices(word.symbols, k + 1, A, cyclic=False)
        logs = np.log(self.kernel.table.reshape(-1))[idx]
        return math.fsum(head) + math.fsum(logs.tolist())


@dataclass
class GameState:
    n: int = 0
    log_capital: float = 0.0
    history: list[int] = field(default_factory=list)
    banked: float = 0.0
    # Neumaier compensation for the running log-capital sum
    _carry: float = field(default=0.0, repr=False)

    def add_log(self, x: float) -> None:
        s = self.log_capital
        t = s + x
        if abs(s) >= abs(x):
            self._carry += (s - t) + x
        else:
            self._carry += (x - t) + s
        self.log_capital = t

    def reset_log(self, value: float) -> None:
        self.log_capital = value
        self._carry = 0.0

    @property
    def log_capital_sum(self) -> float:
        return self.log_capital + self._carry

    @property
    def capital(self) -> float:
        return math.exp(self.log_capital_sum)

    @property
    def total_capital(self) -> float:
        """Banked gains plus capital in play."""
        return self.banked + self.capital


def step(state: GameState, p: Sequence[float], alpha: Sequence[float], outcome: int) -> GameState:
    """Apply one round of the capital recursion in log domain."""
    x = alpha[outcome] - math.fsum(a * pp for a, pp in zip(alpha, p))
    if not x > -1:
        raise PrudenceViolation(f"round {state.n + 1}: capital factor {1 + x!r} on outcome {outcome}")
    state.add_log(math.log1p(x))
    state.history.append(outcome)
    state.n += 1
    return state


@dataclass
class Trajectory:
    """Per-round record of a game.

    Row ``i`` holds the forecast and Skeptic's ``Q`` for round ``i + 1``,
    the outcome, and the protocol log-capital and banked total after it.
    """

    alphabet_size: int
    forecasts: np.ndarray
    predictions: np.ndarray
    outcomes: np.ndarray
    log_capital: np.ndarray
    banked: np.ndarray

    def __len__(self) -> int:
        return int(self.outcomes.size)

    @property
    def word(self) -> Word:
        return Word(self.outcomes, self.alphabet_size)

    @property
    def final_log_capital(self) -> float:
        return float(self.log_capital[-1]) if len(self) else 0.0

    def total_log_capital(self) -> np.ndarray:
        """``ln(banked + K_n)`` per round."""
        with np.errstate(divide="ignore"):
            return np.logaddexp(np.log(self.banked), self.log_capital)

    def alphas(self) -> np.ndarray:
        return self.predictions / self.forecasts


def run(forecaster: Forecaster, skeptic: Strategy, reality, n: int) -> Trajectory:
    """Play ``n`` rounds: Forecaster, then Skeptic, then Reality."""
    if n < 1:
        raise InvalidArgument(f"horizon must be positive, got {n}")
    A = forecaster.alphabet_size
    state = GameState()
    forecasts = np.empty((n, A))
    predictions = np.empty((n, A))
    outcomes = np.empty(n, dtype=np.int64)
    log_k = np.empty(n)
    banked = np.empty(n)
    history = state.history
    for i in range(n):
        p = forecaster.forecast(history)
        Q = skeptic.predict(p)
        alpha = tuple(q / pp for q, pp in zip(Q, p))
        w = reality.next(history)
        step(state, p, alpha, w)
        skeptic.update(w)
        log_cap = state.log_capital_sum
        cap = math.exp(log_cap) if log_cap < 700 else math.inf
        moved = skeptic.settle(cap)
        if moved:
            state.banked += moved
            state.reset_log(math.log(cap - moved))
            log_cap = state.log_capital
        forecasts[i] = p
        predictions[i] = Q
        outcomes[i] = w
        log_k[i] = log_cap
        banked[i] = state.banked
    return Trajectory(A, forecasts, predictions, outcomes, log_k, banked)


def exact_capital(forecaster: Forecaster, skeptic: Strategy, word: Word) -> Fraction:
    """``K_n`` in rational arithmetic for an exact-mode skeptic.

    The forecaster's announcements are converted to Fractions exactly.
    """
    K = Fraction(1)
    history: list[int] = []
    for w in word.tolist():
        p = tuple(Fraction(x) for x in forecaster.forecast(history))
        Q = skeptic.predict(p)
        alpha = tuple(Fraction(q) / pp for q, pp in zip(Q, p))
        factor = capital_factor(alpha, p, w)
        if factor <= 0:
            raise PrudenceViolation(f"capital factor {factor} on outcome {w}")
        K *= factor
        skeptic.update(w)
        history.append(w)
    return K


@dataclass(frozen=True)
class SzilardConfig:
    """Engine geometry: chamber lengths in meters, ``g`` in m/s^2.

    ``unit_capital_to_energy`` converts one unit of game capital into
    joules, so the initial stake ``W_0`` is that many joules.
    """

    lengths: tuple[float, ...]
    g: float = 9.80665
    unit_capital_to_energy: float = 1.0

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        if len(lengths) < 2 or any(not x > 0 for x in lengths):
            raise InvalidArgument(f"chamber lengths must be positive, got {self.lengths}")
        if not self.g > 0 or not self.unit_capital_to_energy > 0:
            raise InvalidArgument("g and the capital-to-energy scale must be positive")
        object.__setattr__(self, "lengths", lengths)

    @property
    def total_length(self) -> float:
        return math.fsum(self.lengths)

    @property
    def probabilities(self) -> tuple[float, ...]:
        L = self.total_length
        return tuple(x / L for x in self.lengths)

    @property
    def r(self) -> float:
        """Chance of the right chamber in the two-chamber engine."""
        if len(self.lengths) != 2:
            raise InvalidArgument("r is defined for the two-chamber engine only")
        return self.lengths[1] / self.total_length


@dataclass
class WorkLedger:
    """Weights placed and work extracted per round, in SI units.

    ``masses`` and ``work`` are in kilograms and joules; they overflow to
    ``inf`` once the stake exceeds float range, while ``log_work`` stays
    finite.
    """

    masses: np.ndarray
    delta_work: np.ndarray
    log_work: np.ndarray

    @property
    def work(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_work)


def szilard_work(trajectory: Trajectory, config: SzilardConfig) -> WorkLedger:
    """Replay a game's bets as weights on the engine and book the work.

    The weight on container ``a`` is ``W_{n-1} alpha_n(a) / (g L)`` for two
    chambers and ``2 W_{n-1} alpha_n(a) / (g L)`` for more, where ``L`` is
    the cylinder length; the work then follows the engine's own update rule.
    Gains banked by a restart wrapper are not part of the engine's stake.
    """
    A = trajectory.alphabet_size
    if len(config.lengths) != A:
        raise InvalidArgument(f"{len(config.lengths)} chambers for an alphabet of size {A}")
    p = np.array(config.probabilities)
    if not np.allclose(trajectory.forecasts, p, rtol=0, atol=1e-12):
        raise UnsupportedProtocol("the engine needs the constant forecast set by its chamber lengths")
    if np.any(trajectory.banked != 0):
        raise UnsupportedProtocol("the engine ledger covers games without banking")
    g, L, scale = config.g, config.total_length, config.unit_capital_to_energy
    alphas = trajectory.alphas()
    n = len(trajectory)
    masses = np.empty((n, A))
    delta = np.empty(n)
    log_w = np.empty(n)
    log_prev = math.log(scale)
    for i in range(n):
        w = int(trajectory.outcomes[i])
        # per joule of stake, so the ledger survives stakes beyond float range
        unit_m = alphas[i] / (g * L) if A == 2 else 2 * alphas[i] / (g * L)
        if A == 2:
            gain = (unit_m[1] - unit_m[0]) * g * L * (w - config.r)
        else:
            gain = sum(unit_m[a] * g / 2 * L * ((a == w) - p[a]) for a in range(A))
        if not gain > -1:
            raise PrudenceViolation(f"round {i + 1}: engine loses its whole stake")
        with np.errstate(over="ignore"):
            stake = math.exp(log_prev) if log_prev < 700 else math.inf
            masses[i] = unit_m * stake
            delta[i] = gain * stake if gain else 0.0
        log_prev += math.log1p(gain)
        log_w[i] = log_prev
    return WorkLedger(masses, delta, log_w)
