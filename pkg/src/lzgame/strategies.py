"""Skeptic's betting strategies.

Every strategy here is expressed as a predictor: given the forecast ``p``
it announces a conditional distribution ``Q`` over the next symbol, and the
bet is derived from it with :func:`q_to_alpha`. With that bet the capital
factor on outcome ``w`` is exactly ``Q(w) / p(w)``.

Strategies are stateful. The game calls ``predict`` before each move,
``update`` with the revealed symbol, then ``settle`` with the current
protocol capital (only the restart wrapper uses the last hook).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .core import InvalidArgument, PrudenceViolation, UnsupportedProtocol
from .lz import ParseState, feed, q_lz_all


def q_to_alpha(Q: Sequence, p: Sequence) -> tuple:
    """Canonical bet ``alpha(a) = Q(a) / p(a)`` realizing ``Q`` against ``p``."""
    if len(Q) != len(p):
        raise InvalidArgument("Q and p differ in length")
    if any(x <= 0 for x in Q) or any(x <= 0 for x in p):
        raise InvalidArgument("Q and p must be strictly positive")
    return tuple(q / pp for q, pp in zip(Q, p))


def capital_factor(alpha: Sequence, p: Sequence, outcome: int):
    """``1 + sum_a alpha(a) (delta_w(a) - p(a))``."""
    return 1 + alpha[outcome] - sum(a * pp for a, pp in zip(alpha, p))


def alpha_to_q(alpha: Sequence, p: Sequence) -> tuple:
    """The conditional distribution a bet implies: factor times forecast."""
    if len(alpha) != len(p):
        raise InvalidArgument("alpha and p differ in length")
    shift = sum(a * pp for a, pp in zip(alpha, p))
    Q = []
    for w, pw in enumerate(p):
        factor = 1 + alpha[w] - shift
        if factor <= 0:
            raise PrudenceViolation(f"bet {list(alpha)} loses everything on outcome {w}")
        Q.append(factor * pw)
    return tuple(Q)


class Strategy:
    """Base class; subclasses override ``predict`` and usually ``update``."""

    name = "strategy"

    def __init__(self, exact: bool = False):
        self.exact = exact

    def predict(self, p: Sequence) -> tuple:
        raise NotImplementedError

    def bet(self, p: Sequence) -> tuple:
        return q_to_alpha(self.predict(p), p)

    def update(self, symbol: int) -> None:
        pass

    def settle(self, capital: float) -> float:
        """Amount of ``capital`` to move out of play after a step."""
        return 0.0

    def fresh(self) -> "Strategy":
        """A new instance in the initial state."""
        raise NotImplementedError


class NoBet(Strategy):
    """Announces the forecast itself, so capital never moves."""

    name = "none"

    def predict(self, p):
        return tuple(p)

    def fresh(self):
        return NoBet(self.exact)


class LZStrategy(Strategy):
    """Bets with the incremental-parsing predictor; ignores the forecast."""

    name = "lz"

    def __init__(self, alphabet_size: int, exact: bool = False):
        super().__init__(exact)
        self.alphabet_size = alphabet_size
        self.state = ParseState(alphabet_size)

    def predict(self, p):
        return q_lz_all(self.state, self.exact)

    def update(self, symbol):
        feed(self.state, symbol)

    def fresh(self):
        return LZStrategy(self.alphabet_size, self.exact)


class LDStrategy(Strategy):
    """Type-counting (Lynch-Davisson) bet for a constant forecast.

    Bets ``alpha_n(a) = (S_{n-1}(a) + 1) / (p(a) (n + A - 1))`` where
    ``S_{n-1}`` counts past symbols; the implied ``Q`` is the add-one
    estimate and the capital is the multinomial ratio.
    """

    name = "ld"

    def __init__(self, alphabet_size: int, exact: bool = False):
        super().__init__(exact)
        self.alphabet_size = alphabet_size
        self.counts = [0] * alphabet_size
        self.n = 0
        self._p = None

    def _check_forecast(self, p):
        p = tuple(p)
        if self._p is None:
            self._p = p
        elif p != self._p:
            raise UnsupportedProtocol("the type-counting strategy needs a constant forecast")

    def alpha(self, p) -> tuple:
        self._check_forecast(p)
        denom = self.n + self.alphabet_size  # (n+1) + A - 1 for the coming step
        if self.exact:
            return tuple(Fraction(c + 1, denom) / Fraction(pa) for c, pa in zip(self.counts, p))
        return tuple((c + 1) / (pa * denom) for c, pa in zip(self.counts, p))

    def bet(self, p):
        return self.alpha(p)

    def predict(self, p):
        self._check_forecast(p)
        denom = self.n + self.alphabet_size
        if self.exact:
            return tuple(Fraction(c + 1, denom) for c in self.counts)
        return tuple((c + 1) / denom for c in self.counts)

    def update(self, symbol):
        self.counts[symbol] += 1
        self.n += 1

    def fresh(self):
        return LDStrategy(self.alphabet_size, self.exact)


class RestartWrapper(Strategy):
    """Bank gains whenever the session capital reaches ``threshold``.

    Plays ``inner`` until the protocol capital is at least ``threshold``,
    then moves ``capital - 1`` out of play and restarts ``inner`` from its
    initial state with capital 1. Banked amounts never decrease.
    """

    name = "lz-restart"

    def __init__(self, inner: Strategy, threshold: float = 2.0):
        if not threshold > 1:
            raise InvalidArgument(f"threshold must exceed 1, got {threshold}")
        super().__init__(inner.exact)
        self._template = inner.fresh()
        self.inner = inner
        self.threshold = threshold
        self.restarts = 0

    def predict(self, p):
        return self.inner.predict(p)

    def bet(self, p):
        return self.inner.bet(p)

    def update(self, symbol):
        self.inner.update(symbol)

    def settle(self, capital):
        if capital >= self.threshold:
            self.inner = self._template.fresh()
            self.restarts += 1
            return capital - 1
        return 0.0

    def fresh(self):
        return RestartWrapper(self._template.fresh(), self.threshold)


STRATEGIES: dict[str, Callable[..., Strategy]] = {
    "lz": lambda A, threshold=2.0, exact=False: LZStrategy(A, exact),
    "ld": lambda A, threshold=2.0, exact=False: LDStrategy(A, exact),
    "lz-restart": lambda A, threshold=2.0, exact=False: RestartWrapper(LZStrategy(A, exact), threshold),
    "ld-restart": lambda A, threshold=2.0, exact=False: RestartWrapper(LDStrategy(A, exact), threshold),
    "none": lambda A, threshold=2.0, exact=False: NoBet(exact),
}


def make_strategy(name: str, alphabet_size: int, threshold: float = 2.0, exact: bool = False) -> Strategy:
    try:
        factory = STRATEGIES[name]
    except KeyError:
        raise InvalidArgument(f"unknown skeptic {name!r}; choose from {sorted(STRATEGIES)}") from None
    return factory(alphabet_size, threshold=threshold, exact=exact)


def lz_strategy(alphabet_size: int, exact: bool = False) -> LZStrategy:
    return LZStrategy(alphabet_size, exact)


def ld_strategy(alphabet_size: int, exact: bool = False) -> LDStrategy:
    return LDStrategy(alphabet_size, exact)


def restart_wrapper(inner: Strategy, threshold: float = 2.0) -> RestartWrapper:
    return RestartWrapper(inner, threshold)
