"""Diagnostics behind the divergence argument.

Everything here is a pure function of a finished word: the empirical
likelihood ``R_hat`` under the word's own cyclic Markov fit, the
KL decomposition of ``-ln P~ + ln R_hat``, the phrase-count inequality with
its explicit slack, and the type-counting deficiency and Fisher statistic.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import GameError, InvalidArgument, Word, window_indices
from .game import Forecaster, MarkovForecaster
from .lz import log_q_lz, parse_state
from .markov import MarkovKernel, empirical_counts, stationary, entropy_rate


class InequalityViolation(GameError):
    pass


def r_hat(word: Word, ell: int) -> float:
    """``ln R_hat``: log-likelihood of the word under its order-``ell`` cyclic fit.

    Position ``i`` is predicted from the ``ell`` symbols before it, read
    cyclically, so every factor is a ratio of positive cyclic counts.
    """
    n = len(word)
    if ell < 1 or ell >= n:
        raise InvalidArgument(f"need 1 <= ell < {n}, got {ell}")
    A = word.size
    idx = window_indices(word.symbols, ell + 1, A, cyclic=True)
    _, inv, counts = np.unique(idx, return_inverse=True, return_counts=True)
    _, cinv, ccounts = np.unique(idx // A, return_inverse=True, return_counts=True)
    return math.fsum(np.log(counts[inv]).tolist()) - math.fsum(np.log(ccounts[cinv]).tolist())


def cyclic_contexts(word: Word, length: int, positions: int) -> list[tuple[int, ...]]:
    """The ``length`` symbols before each of the first ``positions`` positions, read cyclically."""
    sym = word.tolist()
    n = len(sym)
    return [tuple(sym[(i - length + j) % n] for j in range(length)) for i in range(positions)]


@dataclass(frozen=True)
class DivergenceDecomposition:
    """Both sides of ``-ln P~(w) + ln R_hat(w) = boundary + weighted KL``.

    ``direct`` is the left side computed from the forecaster and ``r_hat``;
    ``total`` is the right side assembled from cyclic counts and the kernel.
    """

    direct: float
    boundary_term: float
    weighted_kl: float
    total: float

    @property
    def gap(self) -> float:
        return abs(self.direct - self.total)

    def as_dict(self) -> dict:
        return {**asdict(self), "gap": self.gap}


def weighted_kl(word: Word, kernel: MarkovKernel, ell: int) -> float:
    """``sum_{a^ell} T(a^ell) D(M_hat(.|a^ell) || M(.|last k of a^ell))``."""
    A, k = word.size, kernel.order
    counts = empirical_counts(word, ell).astype(float)
    totals = counts.sum(axis=1)
    suffix = np.arange(A**ell) % (A**k)
    rows = kernel.table[suffix]
    terms = []
    for ctx in np.flatnonzero(totals).tolist():
        c = counts[ctx]
        pos = c > 0
        terms.extend((c[pos] * np.log(c[pos] / (totals[ctx] * rows[ctx][pos]))).tolist())
    return math.fsum(terms)


def divergence_decomposition(
    word: Word, kernel: MarkovKernel, forecaster: Forecaster | None = None, ell: int | None = None
) -> DivergenceDecomposition:
    k = kernel.order
    ell = k if ell is None else ell
    n = len(word)
    if ell < k:
        raise InvalidArgument(f"ell={ell} is below the kernel order {k}")
    if ell >= n:
        raise InvalidArgument(f"ell={ell} must be below the word length {n}")
    if forecaster is None:
        forecaster = MarkovForecaster(kernel)
    direct = -forecaster.log_prob(word) + r_hat(word, ell)
    head = word[:ell]
    wrapped = [
        math.log(kernel.prob(a, ctx))
        for a, ctx in zip(head.tolist(), cyclic_contexts(word, k, ell))
    ]
    boundary = -forecaster.log_prob(head) + math.fsum(wrapped)
    wkl = weighted_kl(word, kernel, ell)
    return DivergenceDecomposition(direct, boundary, wkl, boundary + wkl)


@dataclass(frozen=True)
class PhraseStats:
    """Phrase lengths and preceding cyclic contexts, residue merged into the last phrase."""

    n: int
    ell: int
    complexity: int
    histogram: dict[tuple[int, tuple[int, ...]], int]

    def joint_entropy(self) -> float:
        """Entropy (nats) of the (length, context) pair over phrases."""
        c = self.complexity
        if c == 0:
            return 0.0
        return -math.fsum(v / c * math.log(v / c) for v in self.histogram.values())


def phrase_stats(word: Word, ell: int) -> PhraseStats:
    n = len(word)
    state = parse_state(word)
    ends = list(state.boundaries)
    if ends and ends[-1] != n:
        ends[-1] = n
    starts = [0] + ends[:-1]
    contexts = cyclic_contexts(word, ell, n) if ends else []
    hist: dict = {}
    for s, e in zip(starts, ends):
        key = (e - s, contexts[s])
        hist[key] = hist.get(key, 0) + 1
    return PhraseStats(n, ell, state.phrase_count, hist)


def delta_bound(c: int, n: int, ell: int, alphabet_size: int) -> float:
    """Upper bound on the per-symbol slack from phrase count alone."""
    x = c / n
    return x * math.log(n / c) + (1 + x) * math.log1p(x) + x * ell * math.log(alphabet_size)


@dataclass(frozen=True)
class ZivReport:
    n: int
    ell: int
    complexity: int
    lhs: float
    log_r_hat: float
    delta_exact: float
    delta_bound: float

    @property
    def rhs(self) -> float:
        return -self.log_r_hat / self.n + self.delta_bound

    @property
    def rhs_exact(self) -> float:
        return -self.log_r_hat / self.n + self.delta_exact

    def holds(self, tol: float = 1e-12) -> bool:
        return self.lhs <= self.rhs_exact + tol and self.delta_exact <= self.delta_bound + tol

    def as_dict(self) -> dict:
        return {**asdict(self), "rhs": self.rhs, "rhs_exact": self.rhs_exact, "holds": self.holds()}


def ziv_report(word: Word, ell: int) -> ZivReport:
    n = len(word)
    if ell < 1 or ell >= n:
        raise InvalidArgument(f"need 1 <= ell < {n}, got {ell}")
    stats = phrase_stats(word, ell)
    c = stats.complexity
    return ZivReport(
        n=n,
        ell=ell,
        complexity=c,
        lhs=c / n * math.log(c),
        log_r_hat=r_hat(word, ell),
        delta_exact=c / n * stats.joint_entropy(),
        delta_bound=delta_bound(c, n, ell, word.size),
    )


def ziv_delta_bound(word: Word, ell: int) -> float:
    """Slack bound for the phrase-count inequality; raises if the inequality fails."""
    rep = ziv_report(word, ell)
    if not rep.holds():
        raise InequalityViolation(f"phrase-count inequality fails on {word!r}: {rep}")
    return rep.delta_bound


def ld_deficiency(word: Word, p: Sequence[float]) -> float:
    """``log_A`` of ``(A-1)! prod_a S(a)! / (prod_i p(w_i) (n+A-1)!)``."""
    A, n = word.size, len(word)
    if len(p) != A or any(x <= 0 for x in p):
        raise InvalidArgument("p must be a strictly positive distribution over the alphabet")
    counts = np.bincount(word.symbols, minlength=A).tolist()
    terms = [math.lgamma(A), -math.lgamma(n + A)]
    terms += [math.lgamma(s + 1) for s in counts]
    terms += [-s * math.log(pa) for s, pa in zip(counts, p)]
    return math.fsum(terms) / math.log(A)


def ld_capital_exact(word: Word, p: Sequence) -> Fraction:
    """The multinomial ratio ``A^deficiency`` in rational arithmetic."""
    A, n = word.size, len(word)
    counts = np.bincount(word.symbols, minlength=A).tolist()
    num = math.factorial(A - 1)
    for s in counts:
        num *= math.factorial(s)
    den = Fraction(math.factorial(n + A - 1))
    for s, pa in zip(counts, p):
        den *= Fraction(pa) ** s
    return num / den


def fisher_statistic(word: Word, p: Sequence[float]) -> float:
    """``(n / ln n) sum_a (P_hat(a) - p(a))^2 / p(a)`` with ``P_hat`` the symbol frequencies."""
    n = len(word)
    if n < 2:
        raise InvalidArgument("the statistic needs n >= 2")
    freq = np.bincount(word.symbols, minlength=word.size) / n
    p = np.asarray(p, dtype=float)
    return float(n / math.log(n) * np.sum((freq - p) ** 2 / p))


def compression_rate(word: Word) -> float:
    """Per-symbol codelength of the incremental-parsing predictor, in nats."""
    n = len(word)
    return log_q_lz(word) / n if n else 0.0


def report(
    word: Word,
    ell: int = 1,
    p: Sequence[float] | None = None,
    kernel: MarkovKernel | None = None,
) -> dict:
    """Everything ``analyze`` prints, as a JSON-ready dict."""
    n = len(word)
    A = word.size
    state = parse_state(word)
    out: dict = {
        "n": n,
        "alphabet": A,
        "c": state.phrase_count,
        "v_size": state.v_size,
        "rate": compression_rate(word),
    }
    if kernel is not None:
        pi = stationary(kernel)
        out["entropy_rate"] = entropy_rate(kernel, pi)
        if p is None:
            p = (pi.marginal() / pi.marginal().sum()).tolist()
        if kernel.order <= ell < n:
            out["decomposition"] = divergence_decomposition(word, kernel, ell=ell).as_dict()
    if 1 <= ell < n:
        out["delta_bound"] = ziv_report(word, ell).as_dict()
    if p is None:
        p = [1.0 / A] * A
    out["deficiency"] = ld_deficiency(word, p)
    if n >= 2:
        out["fisher"] = fisher_statistic(word, p)
    return out
