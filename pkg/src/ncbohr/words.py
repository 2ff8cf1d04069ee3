"""Combinatorics of the free semigroup on n generators and of commutative multi-indices.

Words are stored as tuples of 1-based letters; the empty tuple is the identity ``g_0``.
Basis vectors of the truncated Fock space are indexed level by level: all words of
length 0, then length 1 in lexicographic order, and so on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError

DEFAULT_MAX_BASIS = 200_000


def max_basis() -> int:
    """Cap on the number of basis words a truncation may enumerate."""
    return DEFAULT_MAX_BASIS


@dataclass(frozen=True, order=True)
class Word:
    """An element of the free semigroup F_n^+."""

    letters: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"generator count must be >= 1, got {self.n}")
        letters = tuple(int(x) for x in self.letters)
        object.__setattr__(self, "letters", letters)
        for x in letters:
            if not 1 <= x <= self.n:
                raise ValidationError(f"letter {x} outside 1..{self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "g0"
        return "".join(f"g{x}" for x in self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def counts(self) -> tuple[int, ...]:
        """Letter-count vector: the multi-index p with lambda_alpha = lambda^p."""
        c = [0] * self.n
        for x in self.letters:
            c[x - 1] += 1
        return tuple(c)

    def to_json(self) -> list[int]:
        return list(self.letters)

    @classmethod
    def from_json(cls, data: Sequence[int], n: int) -> "Word":
        return cls(tuple(data), n)


def identity(n: int) -> Word:
    return Word((), n)


def generator(n: int, i: int) -> Word:
    return Word((i,), n)


def concat(a: Word, b: Word) -> Word:
    _same_n(a, b)
    return Word(a.letters + b.letters, a.n)


def reverse(a: Word) -> Word:
    return Word(a.letters[::-1], a.n)


def divide(a: Word, b: Word) -> Word | None:
    """Return omega with a = b omega, or None when b is not a prefix of a."""
    _same_n(a, b)
    k = len(b)
    if a.letters[:k] != b.letters:
        return None
    return Word(a.letters[k:], a.n)


def _same_n(a: Word, b: Word) -> None:
    if a.n != b.n:
        raise ValidationError(f"words over different alphabets: n={a.n} vs n={b.n}")


def enumerate_words(n: int, k: int) -> list[Word]:
    """All n**k words of length k, lexicographic in their letters."""
    if n < 1 or k < 0:
        raise ValidationError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return [Word(t, n) for t in itertools.product(range(1, n + 1), repeat=k)]


def words_up_to(n: int, L: int) -> list[Word]:
    """All words of length <= L in rank order."""
    check_level(n, L)
    out: list[Word] = []
    for k in range(L + 1):
        out.extend(enumerate_words(n, k))
    return out


def level_offset(n: int, k: int) -> int:
    """Number of words of length < k."""
    if n == 1:
        return k
    return (n**k - 1) // (n - 1)


def basis_size(n: int, L: int) -> int:
    """Number of words of length <= L."""
    return level_offset(n, L + 1)


def check_level(n: int, L: int, cap: int | None = None) -> None:
    if L < 0:
        raise ValidationError(f"truncation level must be >= 0, got {L}")
    cap = max_basis() if cap is None else cap
    size = basis_size(n, L)
    if size > cap:
        raise ValidationError(
            f"basis size {size} for n={n}, L={L} exceeds the cap of {cap} basis vectors"
        )


def rank(w: Word) -> int:
    """Level-major index: offset(|w|) plus the base-n value of (letters - 1)."""
    value = 0
    for x in w.letters:
        value = value * w.n + (x - 1)
    return level_offset(w.n, len(w)) + value


def unrank(n: int, index: int) -> Word:
    if index < 0:
        raise ValidationError("rank must be nonnegative")
    k = 0
    while level_offset(n, k + 1) <= index:
        k += 1
    value = index - level_offset(n, k)
    letters = []
    for _ in range(k):
        value, digit = divmod(value, n)
        letters.append(digit + 1)
    return Word(tuple(reversed(letters)), n)


# -- commutative multi-indices ------------------------------------------------


@dataclass(frozen=True, order=True)
class MultiIndex:
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValidationError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def size(self) -> int:
        return sum(self.exponents)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(e) for e in self.exponents)

    @property
    def multinomial(self) -> int:
        """|p|! / p!"""
        return math.factorial(self.size) // self.factorial

    def to_json(self) -> list[int]:
        return list(self.exponents)


def multi_indices(n: int, k: int) -> list[MultiIndex]:
    """All p in Z_+^n with |p| = k, in lexicographically decreasing order."""
    if k == 0:
        return [MultiIndex((0,) * n)]
    if n == 1:
        return [MultiIndex((k,))]
    out = []
    for first in range(k, -1, -1):
        for rest in multi_indices(n - 1, k - first):
            out.append(MultiIndex((first,) + rest.exponents))
    return out


def lambda_set(p: MultiIndex | Sequence[int]) -> list[Word]:
    """All words whose letter counts equal p, sorted by rank."""
    if not isinstance(p, MultiIndex):
        p = MultiIndex(tuple(p))
    n = p.n
    letters: list[int] = []
    for i, e in enumerate(p.exponents, start=1):
        letters.extend([i] * e)
    return [Word(t, n) for t in _distinct_permutations(letters)]


def _distinct_permutations(items: list[int]) -> Iterable[tuple[int, ...]]:
    # Lexicographic generation without duplicates; items must be sorted.
    items = sorted(items)
    yield tuple(items)
    m = len(items)
    while True:
        i = m - 2
        while i >= 0 and items[i] >= items[i + 1]:
            i -= 1
        if i < 0:
            return
        j = m - 1
        while items[j] <= items[i]:
            j -= 1
        items[i], items[j] = items[j], items[i]
        items[i + 1 :] = reversed(items[i + 1 :])
        yield tuple(items)
