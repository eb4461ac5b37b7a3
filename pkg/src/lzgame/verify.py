"""Exhaustive and randomized checks of the counting, coding and capital identities.

Each suite returns a :class:`SuiteResult`; the ``verify`` subcommand prints
them as JSON and exits nonzero if any fails. Exhaustive suites enumerate every
word up to a length bound; randomized ones are seeded.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .analysis import divergence_decomposition, ld_capital_exact, ziv_report
from .core import InvalidArgument, Word, count_cyclic, conditional_count, format_symbols, window_indices
from .game import ConstantForecaster, MarkovForecaster, exact_capital, run
from .lz import ParseState, brute_force_q, feed, log_q_lz, q_lz_all
from .markov import MarkovKernel, stationary, stationarity_residual
from .realities import MarkovSampler, Replay, make_rng
from .strategies import LDStrategy, LZStrategy


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    counterexample: str | None = None
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checks > 0

    def fail(self, example: str) -> None:
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = example

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
            "counterexample": self.counterexample,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _all_words(n: int, A: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(A), repeat=n)), dtype=np.int64)


def candidate_set(max_len: int = 14, alphabet_size: int = 2, brute_len: int | None = None) -> SuiteResult:
    """Candidate-set size law and exact normalization of the parsing predictor.

    Every prefix of every word of length ``max_len`` is visited. Up to
    ``brute_len`` the predictor is also compared with an explicit enumeration
    of the candidate set.
    """
    res = SuiteResult("candidate-set")
    A = alphabet_size
    brute_len = max_len if brute_len is None else brute_len
    seen: set[tuple[int, ...]] = set()
    for word in itertools.product(range(A), repeat=max_len):
        state = ParseState(A)
        phrases: list[tuple[int, ...]] = []
        for i in range(max_len + 1):
            prefix = word[:i]
            if prefix not in seen:
                seen.add(prefix)
                res.checks += 1
                T = state.phrase_count
                if state.v_size != A + T * (A - 1) or len(state.trie.candidate_set()) != state.v_size:
                    res.fail(format_symbols(prefix, A))
                qs = q_lz_all(state, exact=True)
                if sum(qs) != 1 or min(qs) <= 0:
                    res.fail(format_symbols(prefix, A))
                if i <= brute_len:
                    partial = prefix[state.n_T:]
                    for a in range(A):
                        if qs[a] != brute_force_q(phrases, partial, a, A):
                            res.fail(format_symbols(prefix + (a,), A))
            if i == max_len:
                break
            feed(state, word[i])
            if state.cursor == 0:
                phrases.append(tuple(word[state.boundaries[-2] if len(state.boundaries) > 1 else 0:i + 1]))
    res.detail = {"max_len": max_len, "alphabet": A, "prefixes": len(seen)}
    return res


def _sorted_windows(words: np.ndarray, length: int, A: int) -> np.ndarray:
    return np.sort(window_indices(words, length, A, cyclic=True), axis=1)


def cyclic_identities(max_len: int = 12, alphabets: tuple[int, ...] = (2, 3), api_len: int = 8) -> SuiteResult:
    """Marginalizing cyclic counts of length ``l+1`` over the last or first symbol.

    Binary words up to ``api_len`` go through ``count_cyclic`` and
    ``conditional_count`` pattern by pattern. The rest are checked in
    batches: the multiset of ``(l+1)``-window indices projected onto their
    prefix (resp. suffix) must equal the multiset of ``l``-window indices,
    which is the identity for every pattern at once.
    """
    res = SuiteResult("cyclic-identities")
    for A in alphabets:
        for n in range(2, max_len + 1):
            if A == 2 and n <= api_len:
                for sym in itertools.product(range(A), repeat=n):
                    w = Word(sym, A)
                    for ell in range(1, n):
                        res.checks += 1
                        if not _identities_via_api(w, ell):
                            res.fail(f"{w} l={ell}")
                continue
            words = _all_words(n, A)
            for ell in range(1, n):
                shorter = _sorted_windows(words, ell, A)
                longer = window_indices(words, ell + 1, A, cyclic=True)
                by_prefix = np.sort(longer // A, axis=1)
                by_suffix = np.sort(longer % A**ell, axis=1)
                ok = np.all(by_prefix == shorter, axis=1) & np.all(by_suffix == shorter, axis=1)
                ok &= shorter.shape[1] == n
                res.checks += words.shape[0]
                for row in np.flatnonzero(~ok)[:1].tolist():
                    res.fail(f"{Word(words[row], A)} l={ell}")
                res.failures += max(0, int((~ok).sum()) - 1)
    res.detail = {"max_len": max_len, "alphabets": list(alphabets)}
    return res


def _identities_via_api(w: Word, ell: int) -> bool:
    A, n = w.size, len(w)
    T = count_cyclic(w, ell)
    if T.total() != n:
        return False
    for prefix in itertools.product(range(A), repeat=ell):
        if sum(conditional_count(w, prefix, b) for b in range(A)) != T[prefix]:
            return False
    for tail in itertools.product(range(A), repeat=ell):
        # tail = a_2^l b
        head, b = list(tail[:-1]), tail[-1]
        total = sum(conditional_count(w, [a1] + head, b) for a1 in range(A))
        if total != T[tail]:
            return False
    return True


def ziv(max_len: int = 14, ells: tuple[int, ...] = (1, 2), sampled: tuple[int, ...] = (), seed: int = 0) -> SuiteResult:
    """Phrase-count inequality on every binary word, plus long random words."""
    res = SuiteResult("ziv")
    for n in range(2, max_len + 1):
        for sym in itertools.product((0, 1), repeat=n):
            w = Word(sym, 2)
            for ell in ells:
                if ell < n:
                    res.checks += 1
                    if not ziv_report(w, ell).holds():
                        res.fail(f"{w} l={ell}")
    bounds = {}
    if sampled:
        rng = make_rng(seed)
        big = Word(rng.integers(0, 2, max(sampled)), 2)
        for n in sampled:
            for ell in ells:
                rep = ziv_report(big[:n], ell)
                res.checks += 1
                if not (rep.holds() and rep.lhs <= rep.rhs):
                    res.fail(f"random prefix n={n} l={ell}")
                bounds[f"{n}/{ell}"] = rep.delta_bound
    res.detail = {"max_len": max_len, "ells": list(ells), "sampled_bounds": bounds}
    return res


def divergence(instances: int = 500, max_n: int = 10_000, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    """Two-sided evaluation of the KL decomposition on random words and kernels."""
    res = SuiteResult("divergence")
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(instances):
        k = int(rng.integers(1, 3))
        A = int(rng.integers(2, 4))
        ell = int(rng.integers(k, 4))
        n = int(rng.integers(ell + 1, max_n + 1))
        M = MarkovKernel.random(rng, A, k, floor=0.01)
        w = Word(rng.integers(0, A, n), A)
        d = divergence_decomposition(w, M, ell=ell)
        res.checks += 1
        worst = max(worst, d.gap)
        if not d.gap < tol or d.weighted_kl < 0:
            res.fail(f"k={k} A={A} l={ell} n={n} gap={d.gap:.3e}")
    res.detail = {"instances": instances, "max_gap": worst, "tol": tol}
    return res


def _reference_log_q(name: str, w: Word) -> float:
    if name == "lz":
        return -log_q_lz(w)
    A, n = w.size, len(w)
    counts = np.bincount(w.symbols, minlength=A).tolist()
    return math.lgamma(A) + math.fsum(math.lgamma(c + 1) for c in counts) - math.lgamma(n + A)


def likelihood_ratio(runs: int = 100, n: int = 10_000, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    """``ln K_n`` against ``ln Q(w) - ln P~(w)`` evaluated independently."""
    res = SuiteResult("likelihood-ratio")
    rng = make_rng(seed)
    worst = 0.0
    for r in range(runs):
        A = int(rng.integers(2, 4))
        if r % 2 == 0:
            k = int(rng.integers(1, 3))
            M = MarkovKernel.random(rng, A, k, floor=0.05)
            forecaster = MarkovForecaster(M)
            name = "lz"
        else:
            M = MarkovKernel.iid(rng.dirichlet(np.ones(A)) * 0.9 + 0.1 / A)
            forecaster = ConstantForecaster(M.table[0])
            name = "lz" if r % 4 == 1 else "ld"
        if r % 3 == 0:
            reality = MarkovSampler(M, seed=int(rng.integers(2**31)))
        else:
            other = MarkovKernel.random(rng, A, int(rng.integers(1, 3)), floor=0.05)
            reality = MarkovSampler(other, seed=int(rng.integers(2**31)))
        skeptic = LZStrategy(A) if name == "lz" else LDStrategy(A)
        traj = run(forecaster, skeptic, reality, n)
        w = traj.word
        expected = _reference_log_q(name, w) - forecaster.log_prob(w)
        gap = abs(traj.final_log_capital - expected)
        worst = max(worst, gap)
        res.checks += 1
        if not gap < tol:
            res.fail(f"run {r} ({name}, A={A}) gap={gap:.3e}")
    res.detail = {"runs": runs, "n": n, "max_gap": worst, "tol": tol}
    return res


def martingale(max_n: int = 10, seed: int = 0, tol: float = 1e-9) -> SuiteResult:
    """``sum_w P~(w) K_n(w) = 1`` over all binary words of each length."""
    res = SuiteResult("martingale")
    rng = make_rng(seed)
    M1 = MarkovKernel.random(rng, 2, 1, floor=0.05)
    M2 = MarkovKernel.random(rng, 2, 2, floor=0.05)
    configs = [
        ("lz/constant", lambda: ConstantForecaster([0.3, 0.7]), lambda: LZStrategy(2)),
        ("ld/constant", lambda: ConstantForecaster([0.3, 0.7]), lambda: LDStrategy(2)),
        ("lz/markov1", lambda: MarkovForecaster(M1), lambda: LZStrategy(2)),
        ("lz/markov2", lambda: MarkovForecaster(M2), lambda: LZStrategy(2)),
    ]
    sums = {}
    for label, make_f, make_s in configs:
        forecaster = make_f()
        for n in range(1, max_n + 1):
            terms = []
            for sym in itertools.product((0, 1), repeat=n):
                w = Word(sym, 2)
                traj = run(forecaster, make_s(), Replay(w), n)
                terms.append(math.exp(forecaster.log_prob(w) + traj.final_log_capital))
            total = math.fsum(terms)
            res.checks += 1
            sums[f"{label}/{n}"] = total
            if not abs(total - 1) < tol:
                res.fail(f"{label} n={n} sum={total!r}")
    res.detail = {"max_n": max_n, "max_error": max(abs(v - 1) for v in sums.values())}
    return res


def ld_closed_form(max_len: int = 12, p: tuple = (Fraction(1, 3), Fraction(2, 3))) -> SuiteResult:
    """Type-counting capital equals the multinomial ratio, in rational arithmetic."""
    res = SuiteResult("ld-closed-form")
    forecaster = ConstantForecaster(p)
    A = len(p)
    for n in range(0, max_len + 1):
        for sym in itertools.product(range(A), repeat=n):
            w = Word(sym, A)
            K = exact_capital(forecaster, LDStrategy(A, exact=True), w)
            res.checks += 1
            if K != ld_capital_exact(w, p):
                res.fail(str(w))
    res.detail = {"max_len": max_len, "p": [str(x) for x in p]}
    return res


def stationary_suite(kernels: int = 100, seed: int = 0, tol: float = 1e-10) -> SuiteResult:
    """Fixed-point residual of power iteration on random kernels (k <= 3, A <= 3)."""
    res = SuiteResult("stationary")
    rng = make_rng(seed)
    worst = 0.0
    for i in range(kernels):
        k = int(rng.integers(1, 4))
        A = int(rng.integers(2, 4))
        M = MarkovKernel.random(rng, A, k)
        pi = stationary(M)
        resid = stationarity_residual(M, pi.probs)
        worst = max(worst, resid)
        res.checks += 1
        if not resid < tol or abs(pi.probs.sum() - 1) > 1e-12:
            res.fail(f"kernel {i} (k={k}, A={A}) residual={resid:.3e}")
    # two-state closed form
    for p, q in [(0.3, 0.1), (0.5, 0.5), (0.01, 0.9), (0.77, 0.21)]:
        M = MarkovKernel(1, 2, [[1 - p, p], [q, 1 - q]])
        pi = stationary(M)
        res.checks += 1
        if np.max(np.abs(pi.probs - [q / (p + q), p / (p + q)])) >= 1e-12:
            res.fail(f"two-state p={p} q={q}")
    res.detail = {"kernels": kernels, "max_residual": worst, "tol": tol}
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "candidate-set": candidate_set,
    "cyclic-identities": cyclic_identities,
    "ziv": ziv,
    "divergence": divergence,
    "likelihood-ratio": likelihood_ratio,
    "martingale": martingale,
    "ld-closed-form": ld_closed_form,
    "stationary": stationary_suite,
}


def run_suite(name: str, **kwargs) -> SuiteResult:
    try:
        fn = SUITES[name]
    except KeyError:
        raise InvalidArgument(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    t0 = time.perf_counter()
    result = fn(**kwargs)
    result.seconds = time.perf_counter() - t0
    return result
