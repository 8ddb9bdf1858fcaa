"""Truncated signatures of sampled piecewise-linear paths.

Sampled data is read as a piecewise-linear path, so every lift below is exact
at its truncation level: a linear segment lifts to a tensor exponential of its
increment and blocks aggregate by the concatenation product (Chen identity).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from sdkernel.words import TensorCoeffs, concat_mul, indexer, shuffle_mul


class IntervalError(ValueError):
    """Increments composed over non-adjacent intervals."""


class BlockingError(ValueError):
    """Coarse block count does not divide the number of fine increments."""


@dataclass
class PathSamples:
    """A path observed at strictly increasing times, values in R^d."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64).T).T
        if self.times.ndim != 1 or len(self.times) != len(self.values):
            raise ValueError("times and values must have matching lengths")
        if not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def n_increments(self) -> int:
        return len(self.times) - 1

    def increments(self) -> np.ndarray:
        return np.diff(self.values, axis=0)


@dataclass
class GroupIncrement:
    """A group-like element of T^{<=kappa}(R^d) attached to a time interval."""

    coeffs: TensorCoeffs
    interval: tuple = field(default=(0.0, 1.0))

    @property
    def level(self) -> int:
        return self.coeffs.indexer.max_level

    def __getitem__(self, word) -> float:
        return self.coeffs[word]


def segment_exp(delta, level: int, interval=(0.0, 1.0)) -> GroupIncrement:
    """Tensor exponential of a single linear segment with increment `delta`.

    The coefficient of a word w is prod_k delta[w_k] / |w|!.
    """
    if level < 1:
        raise ValueError(f"need level >= 1, got {level}")
    delta = np.atleast_1d(np.asarray(delta, dtype=np.float64))
    ix = indexer(len(delta), level)
    out = TensorCoeffs.zero(ix)
    block = np.ones(1)
    out.level(0)[:] = block
    for n in range(1, level + 1):
        block = np.multiply.outer(block, delta).reshape(-1) / n
        out.level(n)[:] = block
    return GroupIncrement(out, tuple(interval))


def chen_mul(g: GroupIncrement, h: GroupIncrement, rtol: float = 1e-9) -> GroupIncrement:
    """Chen composition of adjacent increments (truncated concatenation)."""
    scale = max(abs(g.interval[0]), abs(h.interval[1]), 1.0)
    if abs(g.interval[1] - h.interval[0]) > rtol * scale:
        raise IntervalError(f"intervals {g.interval} and {h.interval} are not adjacent")
    return GroupIncrement(concat_mul(g.coeffs, h.coeffs), (g.interval[0], h.interval[1]))


def tensor_exp(x: TensorCoeffs) -> TensorCoeffs:
    """exp of an element with zero empty-word coefficient, truncated."""
    if x.coeffs[0] != 0.0:
        raise ValueError("tensor_exp expects a zero empty-word coefficient")
    out = TensorCoeffs.unit(x.indexer)
    term = TensorCoeffs.unit(x.indexer)
    for k in range(1, x.indexer.max_level + 1):
        term = concat_mul(term, x)
        term.coeffs /= k
        out.coeffs += term.coeffs
    return out


def tensor_log(g: TensorCoeffs) -> TensorCoeffs:
    """log of an element with unit empty-word coefficient, truncated."""
    if abs(g.coeffs[0] - 1.0) > 1e-12:
        raise ValueError("tensor_log expects a unit empty-word coefficient")
    y = g.copy()
    y.coeffs[0] = 0.0
    out = TensorCoeffs.zero(g.indexer)
    term = TensorCoeffs.unit(g.indexer)
    for k in range(1, g.indexer.max_level + 1):
        term = concat_mul(term, y)
        out.coeffs += (-1.0) ** (k + 1) / k * term.coeffs
    return out


def block_increments(path: PathSamples, coarse_n: int, level: int) -> list[GroupIncrement]:
    """Level-`level` lifts of 2^coarse_n blocks of fine increments.

    Block j is the Chen product of the segment exponentials of its
    2^(M - coarse_n) fine segments.
    """
    n_fine = path.n_increments
    n_blocks = 2**coarse_n
    if n_fine % n_blocks:
        raise BlockingError(f"{n_blocks} blocks do not divide {n_fine} fine increments")
    per_block = n_fine // n_blocks
    deltas = path.increments()
    out = []
    for j in range(n_blocks):
        lo = j * per_block
        g = segment_exp(deltas[lo], level, (path.times[lo], path.times[lo + 1]))
        for k in range(lo + 1, lo + per_block):
            g = chen_mul(g, segment_exp(deltas[k], level, (path.times[k], path.times[k + 1])))
        out.append(g)
    return out


def signature_of_path(path: PathSamples, level: int, merge_collinear: bool = True) -> GroupIncrement:
    """Signature of the whole path at the given truncation level.

    Consecutive proportional increments are merged first when requested; for a
    piecewise-linear path this is lossless and it keeps high-level signatures
    affordable when the path has few real segments.
    """
    deltas = path.increments()
    if merge_collinear:
        merged = [deltas[0].copy()]
        for delta in deltas[1:]:
            prev = merged[-1]
            commuting = np.allclose(
                np.outer(prev, delta), np.outer(delta, prev), rtol=0.0, atol=1e-12
            )
            if commuting:
                merged[-1] = prev + delta
            else:
                merged.append(delta.copy())
        deltas = merged
    g = segment_exp(deltas[0], level)
    for delta in deltas[1:]:
        g = GroupIncrement(concat_mul(g.coeffs, segment_exp(delta, level).coeffs))
    return GroupIncrement(g.coeffs, (float(path.times[0]), float(path.times[-1])))


def one_variation(path: PathSamples) -> float:
    """Total variation of the piecewise-linear interpolation."""
    return float(np.linalg.norm(path.increments(), axis=1).sum())


def is_group_like(coeffs: TensorCoeffs, tol: float = 1e-9) -> bool:
    """Check the shuffle relations <g,u><g,v> = sum_{w in u sh v} <g,w>
    for all pairs with |u| + |v| <= max level."""
    ix = coeffs.indexer
    for lu in range(ix.max_level + 1):
        for lv in range(ix.max_level + 1 - lu):
            for u in ix.words(lu):
                for v in ix.words(lv):
                    lhs = coeffs[u] * coeffs[v]
                    rhs = sum(coeffs[w] for w in shuffle_mul(u, v))
                    if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
                        return False
    return True
