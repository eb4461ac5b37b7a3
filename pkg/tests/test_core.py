import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lzgame import Alphabet, InvalidArgument, Word, conditional_count, count_cyclic, count_ordinary
from lzgame.core import _count_cyclic, format_symbols, index_pattern, pattern_index, window_indices

from conftest import w
from strategies_hyp import words


class TestWord:
    def test_text_forms(self):
        assert Word.parse("1211", 2).tolist() == [0, 1, 0, 0]
        assert Word.parse("0100", 2, base=0).tolist() == [0, 1, 0, 0]
        assert Word.parse("0100", 2, base=None).tolist() == [0, 1, 0, 0]
        assert Word.parse("1,12,3", 12).tolist() == [0, 11, 2]
        assert str(Word([0, 11, 2], 12)) == "1,12,3"
        assert str(Word([0, 1, 1], 2)) == "122"

    def test_rejects_bad_symbols(self):
        with pytest.raises(InvalidArgument):
            Word([0, 2], 2)
        with pytest.raises(InvalidArgument):
            Word.parse("1x", 2)
        with pytest.raises(ValueError):
            Alphabet(1)

    def test_immutable_and_hashable(self):
        word = w("0110")
        with pytest.raises(ValueError):
            word.symbols[0] = 1
        assert word == w("0110") and hash(word) == hash(w("0110"))
        assert word[1:3] == w("11")
        assert word + w("1") == w("01101")

    def test_empty(self):
        assert len(Word.parse("", 2)) == 0

    @given(words())
    def test_render_roundtrip(self, word):
        assert Word.parse(word.render(1), word.size, base=1) == word
        assert Word.parse(str(word), word.size) == word


class TestPatterns:
    @given(st.integers(2, 5), st.integers(1, 6), st.data())
    def test_index_roundtrip(self, A, length, data):
        idx = data.draw(st.integers(0, A**length - 1))
        assert pattern_index(index_pattern(idx, length, A), A) == idx

    def test_batched_windows_match_rows(self):
        rows = np.array(list(itertools.product(range(3), repeat=5)))
        batched = window_indices(rows, 3, 3, cyclic=True)
        for r in (0, 17, 242):
            assert np.array_equal(batched[r], window_indices(rows[r], 3, 3, cyclic=True))


class TestCounts:
    def test_ordinary_examples(self, worked_word):
        t = count_ordinary(w("11001"), 1)
        assert (t[[1]], t[[0]]) == (3, 2)
        t = count_ordinary(w("1"), 1)
        assert (t[[1]], t[[0]]) == (1, 0)
        t = count_ordinary(worked_word, 1)
        assert (t[[1]], t[[0]]) == (7, 6)

    def test_cyclic_example(self):
        t = count_cyclic(w("110"), 2)
        assert [t[w(p)] for p in ("11", "10", "01", "00")] == [1, 1, 1, 0]
        assert t.total() == 3

    def test_constant_word(self):
        t = count_cyclic(w("0000"), 2)
        assert t[[0, 0]] == 4 and t.total() == 4

    def test_conditional_example(self):
        assert conditional_count(w("110"), [1], 1) == 1

    def test_errors(self):
        with pytest.raises(InvalidArgument):
            count_ordinary(w("01"), 3)
        with pytest.raises(InvalidArgument):
            count_ordinary(w("01"), 0)
        with pytest.raises(InvalidArgument):
            count_cyclic(w("01"), 2)

    def test_sparse_table_agrees_with_dense(self):
        rng = np.random.default_rng(3)
        word = Word(rng.integers(0, 2, 3000), 2)
        sparse = count_cyclic(word, 22)
        assert not sparse.dense
        assert sparse.total() == 3000
        pattern = word[:22]
        brute = sum(
            1 for i in range(3000)
            if [word[(i + j) % 3000] for j in range(22)] == pattern.tolist()
        )
        assert sparse[pattern] == brute

    @pytest.mark.parametrize("A,max_len", [(2, 10), (3, 6)])
    def test_cyclic_total_and_marginals_exhaustive(self, A, max_len):
        for n in range(2, max_len + 1):
            for sym in itertools.product(range(A), repeat=n):
                word = Word(sym, A)
                for ell in range(1, min(n, 4)):
                    T = count_cyclic(word, ell).as_array()
                    T1 = _count_cyclic(word, ell + 1).as_array().reshape((A,) * (ell + 1))
                    assert T.sum() == n
                    # summing out the last or the first symbol both give T_ell
                    assert np.array_equal(T1.sum(axis=-1).reshape(-1), T)
                    assert np.array_equal(T1.sum(axis=0).reshape(-1), T)

    @given(words(min_len=1, max_len=60), st.integers(1, 5))
    def test_cyclic_close_to_ordinary(self, word, ell):
        if ell > len(word) - 1:
            return
        T = count_cyclic(word, ell)
        S = count_ordinary(word, ell)
        for p, c in T.items():
            assert abs(c - S[p]) <= ell - 1
        for p, c in S.items():
            assert abs(T[p] - c) <= ell - 1

    @given(words(min_len=2, max_len=40))
    def test_counts_match_naive_scan(self, word):
        n, A = len(word), word.size
        sym = word.tolist()
        for ell in (1, 2):
            if ell >= n:
                continue
            naive = {}
            for i in range(n):
                key = tuple(sym[(i + j) % n] for j in range(ell))
                naive[key] = naive.get(key, 0) + 1
            T = count_cyclic(word, ell)
            for key in itertools.product(range(A), repeat=ell):
                assert T[key] == naive.get(key, 0)


def test_format_symbols_large_alphabet():
    assert format_symbols([0, 9], 10) == "1,10"
    assert format_symbols([0, 9], 10, base=0) == "09"
