"""Incremental (LZ78) parsing and the candidate-set conditional probability.

The phrase dictionary is kept as a trie rooted at the empty word. Each node
carries ``v_count``: the number of candidate next phrases (one-symbol
extensions of phrases that are not phrases themselves) lying in its subtree.
Because the candidates below a node always number ``A - #children`` plus the
candidates below each child, the predictive probability of the next symbol
is a ratio of two stored integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import Word, as_word

ROOT = 0


class PhraseTrie:
    def __init__(self, alphabet_size: int):
        self.alphabet_size = alphabet_size
        self.children: list[list[int]] = [[-1] * alphabet_size]
        self.parent: list[int] = [-1]
        self.symbol: list[int] = [-1]
        self.v_count: list[int] = [alphabet_size]
        self.phrase_count = 0

    def __len__(self) -> int:
        return len(self.parent)

    def child(self, node: int, a: int) -> int:
        return self.children[node][a]

    def insert(self, node: int, a: int) -> int:
        """Add phrase ``node·a`` as a new leaf and update candidate counts."""
        A = self.alphabet_size
        new = len(self.parent)
        self.children[node][a] = new
        self.children.append([-1] * A)
        self.parent.append(node)
        self.symbol.append(a)
        self.v_count.append(A)
        # node·a leaves the candidate set and its A extensions join it
        v = self.v_count
        while node != -1:
            v[node] += A - 1
            node = self.parent[node]
        self.phrase_count += 1
        return new

    def path(self, node: int) -> list[int]:
        out = []
        while node != ROOT:
            out.append(self.symbol[node])
            node = self.parent[node]
        return out[::-1]

    def candidate_set(self) -> set[tuple[int, ...]]:
        """All candidate next phrases, enumerated from the trie structure."""
        out = set()
        for node in range(len(self)):
            base = tuple(self.path(node))
            for a, c in enumerate(self.children[node]):
                if c < 0:
                    out.add(base + (a,))
        return out


@dataclass
class ParseState:
    """Incremental parser positioned after ``n`` consumed symbols.

    ``cursor`` is the trie node spelling the current partial phrase
    (the root when the last consumed symbol closed a phrase). ``n_T`` is the
    number of symbols covered by completed phrases, and ``boundaries`` holds
    the end index of each completed phrase.
    """

    alphabet_size: int
    trie: PhraseTrie = field(init=False)
    cursor: int = ROOT
    n: int = 0
    n_T: int = 0
    boundaries: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.trie = PhraseTrie(self.alphabet_size)

    @property
    def phrase_count(self) -> int:
        return self.trie.phrase_count

    @property
    def v_size(self) -> int:
        """Size of the candidate set, ``A + T(A-1)``."""
        return self.trie.v_count[ROOT]


def feed(state: ParseState, a: int) -> ParseState:
    """Consume one symbol, closing a phrase when ``cursor·a`` is new."""
    trie = state.trie
    c = trie.children[state.cursor][a]
    state.n += 1
    if c >= 0:
        state.cursor = c
    else:
        trie.insert(state.cursor, a)
        state.cursor = ROOT
        state.n_T = state.n
        state.boundaries.append(state.n)
    return state


def q_lz(state: ParseState, a: int, exact: bool = False) -> float | Fraction:
    """Probability of ``a`` as the next symbol.

    The ratio of candidates extending ``partial·a`` to candidates extending
    the current partial phrase. A missing child means ``partial·a`` is itself
    a single candidate.
    """
    trie = state.trie
    den = trie.v_count[state.cursor]
    c = trie.children[state.cursor][a]
    num = trie.v_count[c] if c >= 0 else 1
    if exact:
        return Fraction(num, den)
    return num / den


def q_lz_all(state: ParseState, exact: bool = False) -> tuple:
    """``q_lz`` for every symbol at once."""
    trie = state.trie
    v = trie.v_count
    den = v[state.cursor]
    nums = [v[c] if c >= 0 else 1 for c in trie.children[state.cursor]]
    if exact:
        return tuple(Fraction(x, den) for x in nums)
    return tuple(x / den for x in nums)


@dataclass(frozen=True)
class ParseResult:
    phrases: list[Word]
    residue: Word
    complexity: int
    v_size: int

    def slashes(self, base: int = 1) -> str:
        """Slash-delimited rendering, e.g. ``/1/0/00/01/11/010/11``."""
        parts = [p.render(base) for p in self.phrases]
        if len(self.residue):
            parts.append(self.residue.render(base))
        return "".join("/" + p for p in parts)


def parse_state(word: Word) -> ParseState:
    state = ParseState(word.size)
    for a in word.tolist():
        feed(state, a)
    return state


def parse(word: Word | str, alphabet: int | None = None, base: int | None = 1) -> ParseResult:
    """Split ``word`` into distinct phrases plus a (possibly empty) residue."""
    word = as_word(word, alphabet, base)
    state = parse_state(word)
    symbols = word.symbols
    phrases = []
    start = 0
    for end in state.boundaries:
        phrases.append(Word(symbols[start:end], word.alphabet))
        start = end
    residue = Word(symbols[state.n_T:], word.alphabet)
    return ParseResult(phrases, residue, state.phrase_count, state.v_size)


def complexity(word: Word) -> int:
    return parse_state(word).phrase_count


def log_q_lz(word: Word, exact: bool = False) -> float | Fraction:
    """Codelength ``-ln Q_LZ(word)`` in nats, by replaying the parser.

    With ``exact=True`` returns ``Q_LZ(word)`` itself as a Fraction.
    """
    state = ParseState(word.size)
    if exact:
        prob = Fraction(1)
        for a in word.tolist():
            prob *= q_lz(state, a, exact=True)
            feed(state, a)
        return prob
    trie = state.trie
    v = trie.v_count
    children = trie.children
    terms = []
    log = math.log
    for a in word.tolist():
        cur = state.cursor
        c = children[cur][a]
        num = v[c] if c >= 0 else 1
        terms.append(log(v[cur]))
        terms.append(-log(num))
        feed(state, a)
    return math.fsum(terms)


def phrase_codelength(phrase_count: int, alphabet_size: int) -> float:
    """``sum_{j<T} ln(A + j(A-1))``: codelength at a phrase boundary."""
    A = alphabet_size
    return math.fsum(math.log(A + j * (A - 1)) for j in range(phrase_count))


def brute_force_q(phrases: Sequence[Sequence[int]], partial: Sequence[int], a: int, alphabet_size: int) -> Fraction:
    """Candidate-set ratio computed by enumerating the set explicitly."""
    dictionary = {()} | {tuple(p) for p in phrases}
    candidates = {
        p + (b,) for p in dictionary for b in range(alphabet_size) if p + (b,) not in dictionary
    }
    partial = tuple(partial)
    ext = partial + (a,)
    num = sum(1 for xi in candidates if xi[: len(ext)] == ext)
    den = sum(1 for xi in candidates if xi[: len(partial)] == partial)
    return Fraction(num, den)

