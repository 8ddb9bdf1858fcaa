"""Words over {1..d} and the truncated tensor algebra T^{<=N}(R^d).

A word is a tuple of letters in [1, d].  The flat index space is
length-major, lexicographic within a length, so level k occupies the
contiguous block [offset(k), offset(k+1)) of size d^k and the empty word
sits at index 0.  TensorCoeffs is a dense coefficient vector over that
index space; all products below are truncated at the indexer's max level.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

Word = tuple  # letters in [1, d]

EMPTY_WORD: Word = ()


class DimensionError(ValueError):
    """Operands do not share an indexer / truncation level."""


class WordRangeError(ValueError):
    """Word too long or letter outside [1, d]."""


class WordIndexer:
    """Bijection between words of length <= max_level and [0, total_dim)."""

    def __init__(self, dim: int, max_level: int):
        if dim < 1 or max_level < 0:
            raise ValueError(f"need dim >= 1 and max_level >= 0, got {dim}, {max_level}")
        self.dim = dim
        self.max_level = max_level
        # offsets[k] = number of words shorter than k letters; offsets[N+1] = total_dim
        self.level_offsets = np.cumsum([0] + [dim**k for k in range(max_level + 1)])
        self.total_dim = int(self.level_offsets[-1])

    def __eq__(self, other):
        return (
            isinstance(other, WordIndexer)
            and self.dim == other.dim
            and self.max_level == other.max_level
        )

    def __hash__(self):
        return hash((self.dim, self.max_level))

    def __repr__(self):
        return f"WordIndexer(dim={self.dim}, max_level={self.max_level})"

    def index(self, word: Word) -> int:
        """Flat index of a word under length-major lexicographic order."""
        n = len(word)
        if n > self.max_level:
            raise WordRangeError(f"word {word} longer than max level {self.max_level}")
        ix = 0
        for letter in word:
            if not 1 <= letter <= self.dim:
                raise WordRangeError(f"letter {letter} outside [1, {self.dim}]")
            ix = ix * self.dim + (letter - 1)
        return int(self.level_offsets[n]) + ix

    def word(self, index: int) -> Word:
        """Inverse of :meth:`index`."""
        if not 0 <= index < self.total_dim:
            raise WordRangeError(f"index {index} outside [0, {self.total_dim})")
        n = int(np.searchsorted(self.level_offsets, index, side="right")) - 1
        rem = index - int(self.level_offsets[n])
        letters = []
        for _ in range(n):
            rem, digit = divmod(rem, self.dim)
            letters.append(digit + 1)
        return tuple(reversed(letters))

    def level_slice(self, level: int) -> slice:
        """Contiguous slice of the coefficient vector holding level `level`."""
        return slice(int(self.level_offsets[level]), int(self.level_offsets[level + 1]))

    def words(self, level: int):
        """All words of exactly `level` letters, in index order."""
        return product(range(1, self.dim + 1), repeat=level)

    def all_words(self):
        for n in range(self.max_level + 1):
            yield from self.words(n)


@lru_cache(maxsize=None)
def indexer(dim: int, max_level: int) -> WordIndexer:
    """Shared WordIndexer instances (they are immutable)."""
    return WordIndexer(dim, max_level)


@dataclass
class TensorCoeffs:
    """Dense element of T^{<=N}(R^d): one real coefficient per word."""

    indexer: WordIndexer
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.shape != (self.indexer.total_dim,):
            raise DimensionError(
                f"coefficient array has shape {self.coeffs.shape}, "
                f"expected ({self.indexer.total_dim},)"
            )

    @classmethod
    def zero(cls, ix: WordIndexer) -> "TensorCoeffs":
        return cls(ix, np.zeros(ix.total_dim))

    @classmethod
    def unit(cls, ix: WordIndexer) -> "TensorCoeffs":
        out = cls.zero(ix)
        out.coeffs[0] = 1.0
        return out

    def __getitem__(self, word: Word) -> float:
        return float(self.coeffs[self.indexer.index(word)])

    def __setitem__(self, word: Word, value: float):
        self.coeffs[self.indexer.index(word)] = value

    def level(self, k: int) -> np.ndarray:
        """View of the level-k block (length d^k)."""
        return self.coeffs[self.indexer.level_slice(k)]

    def copy(self) -> "TensorCoeffs":
        return TensorCoeffs(self.indexer, self.coeffs.copy())

    def truncated(self, level: int) -> "TensorCoeffs":
        """Projection onto T^{<=level}, re-indexed at the lower truncation."""
        sub = indexer(self.indexer.dim, level)
        return TensorCoeffs(sub, self.coeffs[: sub.total_dim].copy())


def _check_shared_indexer(a: TensorCoeffs, b: TensorCoeffs):
    if a.indexer != b.indexer:
        raise DimensionError(f"indexer mismatch: {a.indexer} vs {b.indexer}")


def concat_mul(a: TensorCoeffs, b: TensorCoeffs) -> TensorCoeffs:
    """Truncated concatenation (tensor) product.

    Coefficient of w is the sum of a(u) * b(v) over splittings w = uv; words
    beyond the truncation level are dropped.
    """
    _check_shared_indexer(a, b)
    ix = a.indexer
    out = TensorCoeffs.zero(ix)
    d = ix.dim
    for n in range(ix.max_level + 1):
        block = out.level(n)
        for k in range(n + 1):
            left = a.level(k)
            right = b.level(n - k)
            block += np.multiply.outer(left, right).reshape(d**n)
    return out


def left_contract(a: TensorCoeffs, b: TensorCoeffs) -> TensorCoeffs:
    """Adjoint of left multiplication: <L*_a b, w> = sum_u a(u) b(u w)."""
    _check_shared_indexer(a, b)
    ix = a.indexer
    d = ix.dim
    out = TensorCoeffs.zero(ix)
    for n in range(ix.max_level + 1):
        block = out.level(n)
        for k in range(ix.max_level - n + 1):
            mat = b.level(k + n).reshape(d**k, d**n)
            block += a.level(k) @ mat
    return out


def right_contract(a: TensorCoeffs, b: TensorCoeffs) -> TensorCoeffs:
    """Adjoint of right multiplication: <R*_a b, w> = sum_u a(u) b(w u)."""
    _check_shared_indexer(a, b)
    ix = a.indexer
    d = ix.dim
    out = TensorCoeffs.zero(ix)
    for n in range(ix.max_level + 1):
        block = out.level(n)
        for k in range(ix.max_level - n + 1):
            mat = b.level(n + k).reshape(d**n, d**k)
            block += mat @ a.level(k)
    return out


def pairing(a: TensorCoeffs, b: TensorCoeffs) -> float:
    """Euclidean pairing <a, b> = sum over words of a(w) b(w)."""
    _check_shared_indexer(a, b)
    return float(a.coeffs @ b.coeffs)


def shuffle_mul(a: Word, b: Word) -> list[Word]:
    """All interleavings of a and b preserving internal order, with multiplicity."""
    if not a:
        return [tuple(b)]
    if not b:
        return [tuple(a)]
    return [(a[0],) + w for w in shuffle_mul(a[1:], b)] + [
        (b[0],) + w for w in shuffle_mul(a, b[1:])
    ]


def inverse_shuffle(w: Word) -> list[tuple[Word, Word]]:
    """Ordered pairs (J, L) with multiplicity equal to the coefficient of w in J shuffle L.

    Realized by enumerating position subsets: every subset S of positions of w
    yields the pair (w restricted to S, w restricted to the complement).
    """
    n = len(w)
    out = []
    for mask in range(1 << n):
        left = tuple(w[i] for i in range(n) if mask >> i & 1)
        right = tuple(w[i] for i in range(n) if not mask >> i & 1)
        out.append((left, right))
    return out


def shuffle_coefficient(j: Word, l: Word, w: Word) -> int:
    """Coefficient of w in the shuffle product j * l (brute force)."""
    return sum(1 for u in shuffle_mul(j, l) if u == tuple(w))
