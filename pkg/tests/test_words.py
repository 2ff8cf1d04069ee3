import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncbohr import words as W
from ncbohr.errors import ValidationError


def test_basis_size_small_cases():
    assert W.basis_size(1, 4) == 5
    assert W.basis_size(2, 3) == 1 + 2 + 4 + 8
    assert W.basis_size(3, 2) == 1 + 3 + 9


def test_rank_order_is_level_major_then_lexicographic():
    words = W.words_up_to(2, 2)
    assert [w.letters for w in words] == [(), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    assert [W.rank(w) for w in words] == list(range(7))


@given(st.integers(1, 4), st.integers(0, 200))
def test_unrank_inverts_rank(n, index):
    assert W.rank(W.unrank(n, index)) == index


@given(st.integers(1, 3), st.lists(st.integers(1, 3), max_size=5))
def test_rank_matches_position_in_enumeration(n, letters):
    letters = [min(x, n) for x in letters]
    w = W.Word(tuple(letters), n)
    assert W.words_up_to(n, len(w))[W.rank(w)] == w


def test_concat_divide_reverse():
    a, b = W.Word((1, 2), 3), W.Word((3,), 3)
    ab = W.concat(a, b)
    assert ab.letters == (1, 2, 3)
    assert W.divide(ab, a) == b
    assert W.divide(ab, b) is None
    assert W.divide(ab, W.identity(3)) == ab
    assert W.reverse(ab).letters == (3, 2, 1)


def test_invalid_letters_and_levels():
    with pytest.raises(ValidationError):
        W.Word((0,), 2)
    with pytest.raises(ValidationError):
        W.Word((3,), 2)
    with pytest.raises(ValidationError):
        W.check_level(2, -1)
    with pytest.raises(ValidationError):
        W.check_level(4, 20)
    with pytest.raises(ValidationError):
        W.concat(W.Word((1,), 1), W.Word((1,), 2))


def test_counts_give_the_commutative_exponent():
    assert W.Word((1, 3, 1), 3).counts() == (2, 0, 1)


@pytest.mark.parametrize("n,k", [(1, 3), (2, 4), (3, 3)])
def test_multi_indices_enumerate_all_exponents(n, k):
    ps = W.multi_indices(n, k)
    brute = {e for e in itertools.product(range(k + 1), repeat=n) if sum(e) == k}
    assert {p.exponents for p in ps} == brute
    assert len(ps) == len(brute)
    assert [p.exponents for p in ps] == sorted((p.exponents for p in ps), reverse=True)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_lambda_set_is_the_set_of_distinct_rearrangements(exps):
    p = W.MultiIndex(tuple(exps))
    letters = [i + 1 for i, e in enumerate(exps) for _ in range(e)]
    brute = sorted(set(itertools.permutations(letters)))
    got = W.lambda_set(p)
    assert [w.letters for w in got] == brute
    assert len(got) == math.factorial(p.size) // p.factorial == p.multinomial
    assert all(w.counts() == p.exponents for w in got)


def test_json_round_trip():
    w = W.Word((2, 1, 2), 2)
    assert W.Word.from_json(w.to_json(), 2) == w
