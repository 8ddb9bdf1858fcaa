"""Two independent estimators of the Schwinger-Dyson kernel.

The series route contracts a truncated signature against the moment sequence
of d free semicircular elements; levels 2k contribute with sign (-1)^k and odd
levels vanish, so the kernel is real.  The Monte Carlo route (SDKr) develops
the path into the unitary group with random Hermitian generators and averages
the normalized trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sdkernel.matchings import semicircular_moment_vector
from sdkernel.roughpath import GroupIncrement, PathSamples


@dataclass(frozen=True)
class McConfig:
    """Randomized development settings: matrix size, repetitions, RNG seed."""

    matrix_dim: int = 200
    n_sims: int = 250
    seed: int = 0

    def __post_init__(self):
        if self.matrix_dim < 1 or self.n_sims < 1:
            raise ValueError("matrix_dim and n_sims must be >= 1")


def series_kernel(signature: GroupIncrement) -> float:
    """Moment-series contraction sum_L i^|L| phi(L) S^(L), truncated at the
    signature's level."""
    ix = signature.coeffs.indexer
    moments = semicircular_moment_vector(ix.dim, ix.max_level)
    total = 0.0
    for k in range(0, ix.max_level // 2 + 1):
        level = signature.coeffs.level(2 * k)
        total += (-1.0) ** k * float(moments[2 * k] @ level)
    return total


def sample_hermitian(d: int, cfg, rng: np.random.Generator | None = None) -> np.ndarray:
    """d independent Hermitian matrices with unit-variance entries.

    Off-diagonal entries are complex Gaussians (x + iy)/sqrt(2), diagonals are
    real standard Gaussians; distinct matrices are independent.  `cfg` is
    either an McConfig (matrix size and seed taken from it) or a plain matrix
    size used together with an explicit generator.
    """
    if isinstance(cfg, McConfig):
        n = cfg.matrix_dim
        if rng is None:
            rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    else:
        n = int(cfg)
        if rng is None:
            raise ValueError("pass a Generator when giving a bare matrix size")
    out = np.empty((d, n, n), dtype=np.complex128)
    for i in range(d):
        real = rng.standard_normal((n, n))
        imag = rng.standard_normal((n, n))
        a = (real + 1j * imag) / np.sqrt(2.0)
        herm = np.triu(a, 1)
        herm = herm + herm.conj().T
        herm[np.diag_indices(n)] = rng.standard_normal(n)
        out[i] = herm
    return out


def _unitary_step(generator: np.ndarray, scale: float) -> np.ndarray:
    """exp(i * scale * H) for Hermitian H, via eigendecomposition."""
    eigvals, eigvecs = np.linalg.eigh(generator)
    phases = np.exp(1j * scale * eigvals)
    return (eigvecs * phases) @ eigvecs.conj().T


def sdkr_traces(path: PathSamples, cfg: McConfig) -> np.ndarray:
    """Normalized traces (1/N) Tr(Z) of independent unitary developments.

    Each repetition draws fresh generators from a seed spawned deterministically
    from cfg.seed, then propagates Z across the fine segments by the exact
    unitary step exp((i/sqrt(N)) sum_l A_l dx^(l)).  Consecutive equal
    increments reuse the factored step.
    """
    deltas = path.increments()
    n = cfg.matrix_dim
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_sims)
    out = np.empty(cfg.n_sims, dtype=np.complex128)
    for rep, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        matrices = sample_hermitian(path.dim, n, rng)
        z = np.eye(n, dtype=np.complex128)
        step = None
        prev = None
        for delta in deltas:
            if prev is None or not np.array_equal(delta, prev):
                generator = np.tensordot(delta, matrices, axes=(0, 0))
                step = _unitary_step(generator, 1.0 / np.sqrt(n))
                prev = delta
            z = step @ z
        out[rep] = np.trace(z) / n
    return out


def sdkr_kernel(path: PathSamples, cfg: McConfig) -> float:
    """Monte Carlo Schwinger-Dyson kernel estimate: mean real normalized trace."""
    return float(np.mean(sdkr_traces(path, cfg).real))


def standard_error(samples: np.ndarray) -> float:
    """Plain Monte Carlo standard error of the mean."""
    if len(samples) < 2:
        return float("inf")
    return float(np.std(samples, ddof=1) / np.sqrt(len(samples)))
