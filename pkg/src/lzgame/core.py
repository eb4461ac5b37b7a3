"""Alphabets, words, and ordinary/cyclic occurrence counting.

Symbols are stored 0-based (``0..A-1``). Text rendering is 1-based by
default, so a binary word prints as ``"1211"``; texts written over
``{0..A-1}`` are read and written with ``base=0``. Alphabets whose largest
digit exceeds 9 render as comma-separated integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

# Dense count arrays up to this many patterns, sparse dicts above.
DENSE_LIMIT = 1 << 20


class GameError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgument(GameError, ValueError):
    pass


class PrudenceViolation(GameError):
    """A bet would make capital nonpositive for some outcome."""


class NumericalFailure(GameError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class UnsupportedProtocol(GameError):
    pass


class EndOfSequence(GameError):
    pass


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 2:
            raise InvalidArgument(f"alphabet size must be an integer >= 2, got {self.size!r}")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def __len__(self) -> int:
        return self.size


def _as_alphabet(alphabet: int | Alphabet) -> Alphabet:
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet(int(alphabet))


class Word:
    """An immutable finite sequence of symbol indices in ``[0, A)``."""

    __slots__ = ("_symbols", "alphabet")

    def __init__(self, symbols: Iterable[int] | np.ndarray, alphabet: int | Alphabet):
        self.alphabet = _as_alphabet(alphabet)
        arr = np.asarray(list(symbols) if not isinstance(symbols, np.ndarray) else symbols)
        if arr.size == 0:
            arr = np.zeros(0, dtype=np.int64)
        if arr.ndim != 1:
            raise InvalidArgument("a word is a one-dimensional symbol sequence")
        if not np.issubdtype(arr.dtype, np.integer):
            raise InvalidArgument(f"symbols must be integers, got dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.alphabet.size):
            raise InvalidArgument(f"symbol out of range for alphabet of size {self.alphabet.size}")
        arr = arr.astype(np.int64, copy=True)
        arr.setflags(write=False)
        self._symbols = arr

    @classmethod
    def parse(cls, text: str, alphabet: int | Alphabet, base: int | None = 1) -> "Word":
        """Read the text form (``"1211"`` or ``"1,2,1,1"``).

        ``base`` is the number printed for symbol 0: 1 by default, 0 for
        texts written over ``{0..A-1}``, or ``None`` to pick 0 exactly when
        the text contains a ``0``.
        """
        alphabet = _as_alphabet(alphabet)
        text = text.strip()
        if not text:
            return cls([], alphabet)
        if "," in text:
            tokens = [t.strip() for t in text.split(",") if t.strip()]
        else:
            tokens = [c for c in text if not c.isspace()]
        if base is None:
            base = 0 if any(t == "0" for t in tokens) else 1
        try:
            values = [int(t) - base for t in tokens]
        except ValueError as exc:
            raise InvalidArgument(f"cannot parse word {text!r}") from exc
        return cls(values, alphabet)

    @property
    def symbols(self) -> np.ndarray:
        return self._symbols

    @property
    def size(self) -> int:
        return self.alphabet.size

    def tolist(self) -> list[int]:
        return self._symbols.tolist()

    def __len__(self) -> int:
        return int(self._symbols.size)

    def __iter__(self) -> Iterator[int]:
        return iter(self._symbols.tolist())

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self._symbols[index], self.alphabet)
        return int(self._symbols[index])

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise InvalidArgument("cannot concatenate words over different alphabets")
        return Word(np.concatenate([self._symbols, other._symbols]), self.alphabet)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self._symbols, other._symbols)

    def __hash__(self) -> int:
        return hash((self.alphabet.size, self._symbols.tobytes()))

    def __str__(self) -> str:
        return format_symbols(self.tolist(), self.size)

    def render(self, base: int = 1) -> str:
        return format_symbols(self.tolist(), self.size, base)

    def __repr__(self) -> str:
        return f"Word({str(self)!r}, A={self.size})"


def format_symbols(symbols: Sequence[int], alphabet_size: int, base: int = 1) -> str:
    if alphabet_size + base <= 10:
        return "".join(str(s + base) for s in symbols)
    return ",".join(str(s + base) for s in symbols)


def as_word(word: Word | str | Sequence[int], alphabet: int | Alphabet | None = None, base: int | None = 1) -> Word:
    """Coerce strings (text form) and integer sequences (0-based) to a Word."""
    if isinstance(word, Word):
        return word
    if alphabet is None:
        raise InvalidArgument("alphabet size is required to build a word")
    if isinstance(word, str):
        return Word.parse(word, alphabet, base)
    return Word(word, alphabet)


def pattern_index(pattern: Sequence[int], alphabet_size: int) -> int:
    """Base-A index of a pattern, first symbol most significant."""
    idx = 0
    for s in pattern:
        idx = idx * alphabet_size + int(s)
    return idx


def index_pattern(index: int, length: int, alphabet_size: int) -> tuple[int, ...]:
    out = [0] * length
    for j in range(length - 1, -1, -1):
        index, out[j] = divmod(index, alphabet_size)
    return tuple(out)


def all_words(length: int, alphabet_size: int) -> Iterator[tuple[int, ...]]:
    """Every pattern of the given length, in base-A index order."""
    for idx in range(alphabet_size**length):
        yield index_pattern(idx, length, alphabet_size)


def window_indices(symbols: np.ndarray, length: int, alphabet_size: int, cyclic: bool) -> np.ndarray:
    """Base-A pattern index of every length-``length`` window.

    Ordinary mode yields the ``n - length + 1`` windows of the word itself.
    Cyclic mode yields ``n`` windows of the word read around a circle, so the
    window starting at ``i`` covers positions ``i, i+1, ...`` modulo ``n``;
    the extension is never materialized. A 2-D ``symbols`` array is treated
    as a batch of equal-length words, one per row.
    """
    n = symbols.shape[-1]
    count = n if cyclic else n - length + 1
    if count <= 0:
        return np.zeros(symbols.shape[:-1] + (0,), dtype=np.int64)
    if alphabet_size**length >= 2**62:
        raise InvalidArgument(f"patterns of length {length} overflow a 64-bit index")
    starts = np.arange(count)
    idx = np.zeros(symbols.shape[:-1] + (count,), dtype=np.int64)
    for j in range(length):
        pos = starts + j
        if cyclic:
            pos %= n
        idx = idx * alphabet_size + symbols[..., pos]
    return idx


class CountTable:
    """Occurrence counts of every pattern of one length.

    Dense storage (a flat array of size ``A**length``) is used when that is
    at most ``DENSE_LIMIT`` entries; otherwise only positive counts are kept.
    Absent patterns read as zero.
    """

    def __init__(self, pattern_length: int, alphabet_size: int, mode: str, indices: np.ndarray):
        self.pattern_length = pattern_length
        self.alphabet_size = alphabet_size
        self.mode = mode
        n_patterns = alphabet_size**pattern_length
        if n_patterns <= DENSE_LIMIT:
            self._dense = np.bincount(indices, minlength=n_patterns).astype(np.int64)
            self._sparse = None
        else:
            keys, vals = np.unique(indices, return_counts=True)
            self._dense = None
            self._sparse = dict(zip(keys.tolist(), vals.tolist()))

    @property
    def dense(self) -> bool:
        return self._dense is not None

    def _key(self, pattern) -> int:
        if isinstance(pattern, (int, np.integer)):
            return int(pattern)
        if isinstance(pattern, str):
            pattern = Word.parse(pattern, self.alphabet_size).tolist()
        elif isinstance(pattern, Word):
            pattern = pattern.tolist()
        if len(pattern) != self.pattern_length:
            raise InvalidArgument(
                f"pattern of length {len(pattern)} in a table of length {self.pattern_length}"
            )
        return pattern_index(pattern, self.alphabet_size)

    def __getitem__(self, pattern) -> int:
        key = self._key(pattern)
        if self._dense is not None:
            return int(self._dense[key])
        return self._sparse.get(key, 0)

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Patterns with positive count, as (0-based tuple, count)."""
        if self._dense is not None:
            for key in np.flatnonzero(self._dense).tolist():
                yield index_pattern(key, self.pattern_length, self.alphabet_size), int(self._dense[key])
        else:
            for key in sorted(self._sparse):
                yield index_pattern(key, self.pattern_length, self.alphabet_size), self._sparse[key]

    def as_array(self) -> np.ndarray:
        """Dense count vector indexed by base-A pattern index."""
        if self._dense is not None:
            return self._dense.copy()
        out = np.zeros(self.alphabet_size**self.pattern_length, dtype=np.int64)
        for key, val in self._sparse.items():
            out[key] = val
        return out

    def total(self) -> int:
        if self._dense is not None:
            return int(self._dense.sum())
        return sum(self._sparse.values())

    def __repr__(self) -> str:
        return f"CountTable(length={self.pattern_length}, A={self.alphabet_size}, mode={self.mode!r}, total={self.total()})"


def count_ordinary(word: Word, length: int) -> CountTable:
    """Overlapping occurrences of every pattern of ``length`` in ``word``."""
    if length < 1 or length > len(word):
        raise InvalidArgument(f"pattern length must satisfy 1 <= length <= {len(word)}, got {length}")
    idx = window_indices(word.symbols, length, word.size, cyclic=False)
    return CountTable(length, word.size, "ordinary", idx)


def count_cyclic(word: Word, length: int) -> CountTable:
    """Occurrences in the word extended by its own first ``length - 1`` symbols."""
    if length < 1 or length >= len(word):
        raise InvalidArgument(f"pattern length must satisfy 1 <= length < {len(word)}, got {length}")
    return _count_cyclic(word, length)


def _count_cyclic(word: Word, length: int) -> CountTable:
    idx = window_indices(word.symbols, length, word.size, cyclic=True)
    return CountTable(length, word.size, "cyclic", idx)


def conditional_count(word: Word, prefix: Word | Sequence[int], b: int) -> int:
    """Occurrences of ``b`` right after ``prefix`` in the cyclically extended word."""
    prefix = list(prefix.tolist() if isinstance(prefix, Word) else prefix)
    if len(prefix) < 1 or len(prefix) >= len(word):
        raise InvalidArgument(f"prefix length must satisfy 1 <= length < {len(word)}, got {len(prefix)}")
    if not 0 <= b < word.size:
        raise InvalidArgument(f"symbol {b} out of range")
    return _count_cyclic(word, len(prefix) + 1)[prefix + [b]]
