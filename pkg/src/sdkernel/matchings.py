"""Recursion-generated non-crossing partial matchings and semicircular moments.

The matching family NC(n) is built point by point: each new point is either
left unmatched or paired with the current maximum unmatched point.  This is
strictly smaller than the set of all non-crossing partial matchings (for
example {(1,3), 2 unmatched} is never generated); equivalently, no unmatched
point ever sits nested under a pair, which makes the family closed under
position reversal.  The restricted family NC(l)_n additionally forbids pairs
joining two points of the prefix {1..n}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from sdkernel.words import Word


@dataclass(frozen=True)
class PartialMatching:
    """A matching on {1..n}: disjoint pairs plus the ordered unmatched points."""

    n: int
    pairs: tuple  # ((p, q), ...) with p < q, sorted by q
    unmatched: tuple  # increasing

    def __post_init__(self):
        touched = {i for pq in self.pairs for i in pq} | set(self.unmatched)
        if touched != set(range(1, self.n + 1)) or len(touched) != 2 * len(self.pairs) + len(
            self.unmatched
        ):
            raise ValueError(f"pairs and unmatched must partition 1..{self.n}")


def enumerate_nc(n: int, restricted: int = 0) -> list[PartialMatching]:
    """All recursion-generated matchings on n points, none of whose pairs joins
    two indices in {1..restricted}."""
    if not 0 <= restricted <= n:
        raise ValueError(f"need 0 <= restricted <= n, got {restricted}, {n}")
    return [
        PartialMatching(n, pairs, unmatched)
        for pairs, unmatched in _generate(n, restricted, suffix=False)
    ]


def _generate(n: int, restricted: int, suffix: bool) -> list[tuple[tuple, tuple]]:
    """States (pairs, unmatched) of the point-by-point recursion.

    With suffix=False the forbidden block is the prefix {1..restricted}; with
    suffix=True it is the suffix {n-restricted+1..n}.
    """
    states = [((), ())]
    lo = n - restricted if suffix else 0
    hi = n if suffix else restricted
    for k in range(1, n + 1):
        nxt = []
        for pairs, unmatched in states:
            nxt.append((pairs, unmatched + (k,)))
            if unmatched:
                m = unmatched[-1]
                if not (lo < m <= hi and lo < k <= hi):
                    nxt.append((pairs + ((m, k),), unmatched[:-1]))
        states = nxt
    return states


def nc_cardinality(n: int, restricted: int, d: int) -> int:
    """Closed-form count of NC(n)_restricted over a d-letter alphabet.

    Each pair must carry equal letters (d choices) and each unmatched point is
    free (d choices), so a matching with i pairs is counted d^(n-i) times.
    """
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    if not 0 <= restricted <= n:
        raise ValueError(f"need 0 <= restricted <= n, got {restricted}, {n}")
    if restricted == 0:
        total = 0
        for i in range(n // 2 + 1):
            num = (n - 2 * i + 1) * comb(n + 1, i)
            assert num % (n + 1) == 0
            total += num // (n + 1) * d ** (n - i)
        return total
    t = n - restricted
    total = 0
    for i in range((t + restricted) // 2 + 1):
        low = comb(t, i - restricted - 1) if i - restricted - 1 >= 0 else 0
        total += (comb(t, i) - low) * d ** (t - i)
    return d**restricted * total


def _delta_sign(word: Word, pairs) -> int:
    """Product of (-1) * delta_{letters} over pairs; 0 if any pair mismatches."""
    sign = 1
    for p, q in pairs:
        if word[p - 1] != word[q - 1]:
            return 0
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def semicircular_moment(word: Word) -> int:
    """Mixed moment of d free semicircular elements at the given word.

    Counts the complete non-crossing pairings of the positions in which every
    pair joins equal letters; zero at odd lengths.
    """
    n = len(word)
    if n == 0:
        return 1
    if n % 2:
        return 0
    total = 0
    # pair position 0 with an odd position k carrying the same letter
    for k in range(1, n, 2):
        if word[k] == word[0]:
            total += semicircular_moment(word[1:k]) * semicircular_moment(word[k + 1 :])
    return total


@lru_cache(maxsize=None)
def _moment_level_arrays(d: int, max_level: int) -> tuple:
    """Per-level arrays of semicircular moments over all base-d words.

    Level n holds the moment of every length-n word, indexed lexicographically,
    via the same first-letter pairing recursion as `semicircular_moment` but
    vectorized over the whole level.
    """
    levels = [np.ones(1, dtype=np.int64)]
    for n in range(1, max_level + 1):
        if n % 2:
            levels.append(np.zeros(d**n, dtype=np.int64))
            continue
        codes = np.arange(d**n, dtype=np.int64)
        first = codes // d ** (n - 1)
        acc = np.zeros(d**n, dtype=np.int64)
        for k in range(1, n, 2):
            letter_k = codes // d ** (n - 1 - k) % d
            mid = codes % d ** (n - 1) // d ** (n - k)
            tail = codes % d ** (n - 1 - k)
            acc += (first == letter_k) * levels[k - 1][mid] * levels[n - 1 - k][tail]
        levels.append(acc)
    return tuple(levels)


def semicircular_moment_vector(d: int, max_level: int) -> list[np.ndarray]:
    """Moments of all words of length <= max_level, as per-level dense arrays."""
    return list(_moment_level_arrays(d, max_level))


@dataclass(frozen=True)
class ExpansionTerm:
    """One signed residual of a derivative expansion."""

    sign: int
    residual_word: Word


def gubinelli_expand(word: Word, restricted: int) -> list[ExpansionTerm]:
    """Signed expansion of a derivative coordinate into base coordinates.

    Sums over NC(|word|)_restricted; a matching contributes the product of
    (-1) * delta over its pairs (terms with any unequal-letter pair are
    dropped) times the base coordinate at the unmatched letters.
    """
    return list(_expand(tuple(word), restricted, suffix=False))


def gubinelli_expand_suffix(word: Word, restricted: int) -> list[ExpansionTerm]:
    """As `gubinelli_expand` but forbidding pairs inside the last `restricted`
    positions (used for derivatives taken in the first time argument)."""
    return list(_expand(tuple(word), restricted, suffix=True))


@lru_cache(maxsize=None)
def _expand(word: Word, restricted: int, suffix: bool) -> tuple[ExpansionTerm, ...]:
    out = []
    for pairs, unmatched in _generate(len(word), restricted, suffix):
        sign = _delta_sign(word, pairs)
        if sign:
            out.append(ExpansionTerm(sign, tuple(word[i - 1] for i in unmatched)))
    return tuple(out)
