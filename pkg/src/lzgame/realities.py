"""Reality's move generators: faithful samplers, deviators, and replay.

Randomness comes from numpy's PCG64 bit generator seeded with an integer,
so a seed fixes the whole sequence on every platform. Uniforms are drawn in
blocks; ``next`` and ``generate`` consume the same stream, so mixing the two
never changes the output.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import EndOfSequence, InvalidArgument, Word, index_pattern, pattern_index
from .markov import MarkovKernel, as_distribution, joint_stationary, stationary

BLOCK = 4096


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class Reality:
    alphabet_size: int

    def next(self, history: Sequence[int]) -> int:
        raise NotImplementedError

    def generate(self, n: int) -> Word:
        history: list[int] = []
        for _ in range(n):
            history.append(self.next(history))
        return Word(history, self.alphabet_size)


class _Sampler(Reality):
    def __init__(self, seed: int):
        self.seed = seed
        self._rng = make_rng(seed)
        self._buf = np.empty(0)
        self._pos = 0

    def _uniform(self) -> float:
        if self._pos == self._buf.size:
            self._buf = self._rng.random(BLOCK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return float(u)

    @staticmethod
    def _draw(cum: np.ndarray, u: float) -> int:
        # cum is the cumulative row; the last entry is forced to 1
        return int(np.searchsorted(cum, u, side="right"))


class MarkovSampler(_Sampler):
    """Draws from ``M(. | last k symbols)``; the first k from the stationary law."""

    def __init__(self, kernel: MarkovKernel, seed: int):
        super().__init__(seed)
        self.kernel = kernel
        self.alphabet_size = kernel.alphabet_size
        self._cum = np.cumsum(kernel.table, axis=1)
        self._cum[:, -1] = 1.0
        start = joint_stationary(kernel, stationary(kernel), kernel.order)
        self._start_cum = np.cumsum(start)
        self._start_cum[-1] = 1.0
        self._start: tuple[int, ...] | None = None

    def _row(self, history: Sequence[int]) -> np.ndarray:
        k = self.kernel.order
        return self._cum[pattern_index(history[len(history) - k:], self.alphabet_size)]

    def next(self, history):
        k = self.kernel.order
        n = len(history)
        if n < k:
            if n == 0:
                idx = self._draw(self._start_cum, self._uniform())
                self._start = index_pattern(idx, k, self.alphabet_size)
            return self._start[n]
        return self._draw(self._row(history), self._uniform())

    def clone(self, seed: int) -> "MarkovSampler":
        return MarkovSampler(self.kernel, seed)


class IIDSampler(MarkovSampler):
    def __init__(self, p: Sequence[float], seed: int):
        self.p = as_distribution(p)
        super().__init__(MarkovKernel.iid(self.p), seed)

    def clone(self, seed: int) -> "IIDSampler":
        return IIDSampler(self.p, seed)


class Periodic(Reality):
    def __init__(self, pattern: Sequence[int] | Word, alphabet_size: int | None = None):
        if isinstance(pattern, Word):
            alphabet_size = pattern.size
            pattern = pattern.tolist()
        if not pattern:
            raise InvalidArgument("periodic pattern must be nonempty")
        if alphabet_size is None:
            raise InvalidArgument("alphabet size is required")
        self.pattern = list(pattern)
        self.alphabet_size = alphabet_size

    def next(self, history):
        return self.pattern[len(history) % len(self.pattern)]


class BiasedFlip(MarkovSampler):
    """Samples from ``M`` except after ``target_context``, where ``toward`` gets ``eps`` extra mass.

    The other entries of the target row shrink proportionally, so the
    perturbed row sits at total-variation distance ``eps`` from the original.
    """

    def __init__(self, kernel: MarkovKernel, eps: float, target_context: Sequence[int], seed: int, toward: int | None = None):
        super().__init__(kernel, seed)
        A = kernel.alphabet_size
        if len(target_context) != kernel.order:
            raise InvalidArgument(f"target context must have length {kernel.order}")
        toward = A - 1 if toward is None else toward
        row = kernel.row(target_context).copy()
        rest = 1.0 - row[toward]
        if not 0 < eps < rest:
            raise InvalidArgument(f"eps must lie in (0, {rest:.6g}) for this row")
        perturbed = row * (1 - eps / rest)
        perturbed[toward] = row[toward] + eps
        self.eps = eps
        self.target_context = tuple(target_context)
        self.toward = toward
        self.perturbed_row = perturbed
        cum = np.cumsum(perturbed)
        cum[-1] = 1.0
        self._cum = self._cum.copy()
        self._cum[pattern_index(target_context, A)] = cum

    def clone(self, seed: int) -> "BiasedFlip":
        return BiasedFlip(self.kernel, self.eps, self.target_context, seed, self.toward)


class Replay(Reality):
    """Emits a stored word, then raises :class:`EndOfSequence`."""

    def __init__(self, word: Word):
        self.word = word
        self.alphabet_size = word.size
        self._symbols = word.tolist()

    def next(self, history):
        n = len(history)
        if n >= len(self._symbols):
            raise EndOfSequence(f"replay exhausted after {len(self._symbols)} symbols")
        return self._symbols[n]

    @classmethod
    def from_file(cls, path: str | Path, alphabet_size: int, base: int | None = 1) -> "Replay":
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
        return cls(Word.parse(text, alphabet_size, base))


def markov_sampler(kernel: MarkovKernel, seed: int) -> MarkovSampler:
    return MarkovSampler(kernel, seed)


def iid_sampler(p: Sequence[float], seed: int) -> IIDSampler:
    return IIDSampler(p, seed)


def periodic(pattern: Sequence[int] | Word, alphabet_size: int | None = None) -> Periodic:
    return Periodic(pattern, alphabet_size)


def biased_flip(kernel: MarkovKernel, eps: float, target_context: Sequence[int], seed: int, toward: int | None = None) -> BiasedFlip:
    return BiasedFlip(kernel, eps, target_context, seed, toward)


def replay(word: Word) -> Replay:
    return Replay(word)
