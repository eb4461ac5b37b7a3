"""kth-order Markov kernels, stationary distributions, entropy rate, KL.

A kernel of order ``k`` over an alphabet of size ``A`` is stored as an
``(A**k, A)`` array: row ``ctx`` is the next-symbol distribution after the
context whose base-A index is ``ctx`` (oldest symbol most significant).
All logarithms are natural.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import InvalidArgument, NumericalFailure, Word, _count_cyclic, index_pattern, pattern_index

ROW_TOL = 1e-12
# Loaded rows within this distance of 1 are renormalized, beyond it rejected.
LOAD_TOL = 1e-9


def as_distribution(probs: Sequence[float], strict: bool = True) -> np.ndarray:
    """Validate a probability vector; ``strict`` demands every entry in (0, 1]."""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise InvalidArgument("a distribution needs at least two entries")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise InvalidArgument(f"invalid probabilities {p.tolist()}")
    if strict and np.any(p <= 0):
        raise InvalidArgument(f"probabilities must be strictly positive, got {p.tolist()}")
    if abs(p.sum() - 1.0) > ROW_TOL:
        raise InvalidArgument(f"probabilities sum to {p.sum()!r}, not 1")
    return p


@dataclass(frozen=True, eq=False)
class MarkovKernel:
    """Conditional next-symbol law given the previous ``order`` symbols.

    ``strict`` kernels have every entry positive. Empirical kernels and the
    first-order embedding are built with ``strict=False``.
    """

    order: int
    alphabet_size: int
    table: np.ndarray
    strict: bool = True

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        k, A = self.order, self.alphabet_size
        if k < 1 or A < 2:
            raise InvalidArgument(f"need order >= 1 and alphabet >= 2, got k={k}, A={A}")
        if table.shape != (A**k, A):
            raise InvalidArgument(f"table shape {table.shape} != {(A**k, A)}")
        if not np.all(np.isfinite(table)) or np.any(table < 0):
            raise InvalidArgument("kernel entries must be finite and nonnegative")
        if self.strict and np.any(table <= 0):
            raise InvalidArgument("kernel entries must be strictly positive")
        err = np.max(np.abs(table.sum(axis=1) - 1.0))
        if err > ROW_TOL:
            raise InvalidArgument(f"kernel rows must sum to 1 (max error {err:.2e})")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def row(self, context: Sequence[int]) -> np.ndarray:
        if len(context) != self.order:
            raise InvalidArgument(f"context length {len(context)} != order {self.order}")
        return self.table[pattern_index(context, self.alphabet_size)]

    def prob(self, b: int, context: Sequence[int]) -> float:
        return float(self.row(context)[b])

    def contexts(self):
        for idx in range(self.alphabet_size**self.order):
            yield index_pattern(idx, self.order, self.alphabet_size)

    @classmethod
    def iid(cls, probs: Sequence[float], order: int = 1) -> "MarkovKernel":
        p = as_distribution(probs)
        return cls(order, p.size, np.tile(p, (p.size**order, 1)))

    @classmethod
    def uniform(cls, alphabet_size: int, order: int = 1) -> "MarkovKernel":
        return cls.iid(np.full(alphabet_size, 1.0 / alphabet_size), order)

    @classmethod
    def random(cls, rng: np.random.Generator, alphabet_size: int, order: int, floor: float = 0.0) -> "MarkovKernel":
        """Dirichlet(1) rows, optionally mixed with the uniform row so every entry is >= floor."""
        A = alphabet_size
        rows = rng.dirichlet(np.ones(A), size=A**order)
        if floor > 0:
            rows = floor + (1 - A * floor) * rows
        rows = np.maximum(rows, np.finfo(float).tiny)
        rows /= rows.sum(axis=1, keepdims=True)
        return cls(order, A, rows)

    def to_dict(self) -> dict:
        return {"order": self.order, "alphabet": self.alphabet_size, "rows": self.table.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MarkovKernel":
        try:
            k, A, rows = int(data["order"]), int(data["alphabet"]), data["rows"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"kernel config needs 'order', 'alphabet', 'rows': {exc}") from exc
        table = np.asarray(rows, dtype=float)
        if table.shape != (A**k, A):
            raise InvalidArgument(f"expected {A**k} rows of {A} probabilities, got shape {table.shape}")
        sums = table.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > LOAD_TOL)
        if bad.size:
            ctx = index_pattern(int(bad[0]), k, A)
            raise InvalidArgument(f"row for context {ctx} sums to {sums[bad[0]]!r}")
        return cls(k, A, table / sums[:, None])

    @classmethod
    def load(cls, path: str | Path) -> "MarkovKernel":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    order: int
    alphabet_size: int
    probs: np.ndarray
    residual: float
    iterations: int

    def __getitem__(self, context: Sequence[int]) -> float:
        return float(self.probs[pattern_index(context, self.alphabet_size)])

    def marginal(self) -> np.ndarray:
        """Single-symbol marginal (the same at every position of a stationary context)."""
        return self.probs.reshape(self.alphabet_size**(self.order - 1), self.alphabet_size).sum(axis=0)


def embed_first_order(M: MarkovKernel) -> MarkovKernel:
    """Shift kernel on ``Omega^k``: ``b_1^k`` moves to ``b_2^k a`` with prob ``M(a | b_1^k)``."""
    k, A = M.order, M.alphabet_size
    S = A**k
    table = np.zeros((S, S))
    for b in range(S):
        shifted = (b * A) % S
        table[b, shifted:shifted + A] = M.table[b]
    return MarkovKernel(1, S, table, strict=(k == 1 and M.strict))


def transition_matrix(M: MarkovKernel) -> np.ndarray:
    """Column-stochastic matrix ``T[a, b] = M~(a | b)`` of the first-order embedding."""
    return embed_first_order(M).table.T.copy()


def stationarity_residual(M: MarkovKernel, probs: np.ndarray) -> float:
    """``max |sum_{a_1} M(a_{k+1} | a_1^k) pi(a_1^k) - pi(a_2^{k+1})|``."""
    return float(np.max(np.abs(transition_matrix(M) @ probs - probs)))


def stationary(M: MarkovKernel, tol: float = 1e-12, max_iter: int = 10**6) -> StationaryDistribution:
    """Stationary law of ``M`` over contexts, by power iteration.

    Iterates the k-step shift matrix (strictly positive for strict kernels)
    from the uniform vector. Small steps do not imply small error when the
    chain mixes slowly, so iteration continues past ``tol`` until steps fall
    a thousandfold lower or stop shrinking at roundoff.
    """
    k, A = M.order, M.alphabet_size
    T = transition_matrix(M)
    P = np.linalg.matrix_power(T, k)
    pi = np.full(A**k, 1.0 / A**k)
    diff = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        nxt = P @ pi
        nxt /= nxt.sum()
        prev, diff = diff, float(np.max(np.abs(nxt - pi)))
        pi = nxt
        if diff < tol * 1e-3 or (diff < tol and diff >= prev):
            break
    else:
        raise NumericalFailure(f"power iteration did not converge in {max_iter} steps", diff)
    residual = float(np.max(np.abs(T @ pi - pi)))
    return StationaryDistribution(k, A, pi, residual, it)


def joint_stationary(M: MarkovKernel, pi: StationaryDistribution, length: int) -> np.ndarray:
    """Stationary probability of every word of ``length`` (base-A indexed)."""
    k, A = M.order, M.alphabet_size
    if length < k:
        raise InvalidArgument(f"length {length} < order {k}")
    P = pi.probs.copy()
    S = A**k
    for _ in range(length - k):
        # P[w] for w of length m; extend by one symbol using the last k symbols of w
        ctx = np.arange(P.size) % S
        P = (P[:, None] * M.table[ctx]).reshape(-1)
    return P


def entropy_rate(M: MarkovKernel, pi: StationaryDistribution | None = None) -> float:
    if pi is None:
        pi = stationary(M)
    t = M.table
    with np.errstate(divide="ignore", invalid="ignore"):
        row_h = -np.where(t > 0, t * np.log(t), 0.0).sum(axis=1)
    return float(pi.probs @ row_h)


def kl_divergence(q: Sequence[float], p: Sequence[float]) -> float:
    """``D(q || p)`` in nats with ``0 ln 0 = 0``."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    if q.shape != p.shape:
        raise InvalidArgument("distributions differ in length")
    support = q > 0
    if np.any(p[support] <= 0):
        raise InvalidArgument("q puts mass where p has none")
    return float(np.sum(q[support] * np.log(q[support] / p[support])))


def empirical_counts(word: Word, order: int) -> np.ndarray:
    """Cyclic counts ``T(a^order b)`` as an ``(A**order, A)`` array."""
    A = word.size
    return _count_cyclic(word, order + 1).as_array().reshape(A**order, A)


def empirical_kernel(word: Word, order: int) -> MarkovKernel:
    """Cyclic-count Markov fit of ``word``; unseen contexts get the uniform row."""
    if order < 1 or order >= len(word):
        raise InvalidArgument(f"order must satisfy 1 <= order < {len(word)}, got {order}")
    A = word.size
    counts = empirical_counts(word, order).astype(float)
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        table = np.where(totals > 0, counts / np.where(totals > 0, totals, 1), 1.0 / A)
    return MarkovKernel(order, A, table, strict=False)
