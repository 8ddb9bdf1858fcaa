"""Driving-signal generation (fractional Brownian motion) and path CSV IO."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from sdkernel.roughpath import PathSamples

logger = logging.getLogger(__name__)


class PathCsvError(ValueError):
    """Malformed path CSV; carries the offending line number."""


@dataclass(frozen=True)
class FbmConfig:
    """Fractional Brownian sampler settings."""

    hurst: float
    dims: int = 1
    n_increments: int = 1024
    horizon: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must lie in (0, 1), got {self.hurst}")
        n = self.n_increments
        if n < 1 or n & (n - 1):
            raise ValueError(f"n_increments must be a power of two, got {n}")
        if self.dims < 1 or self.horizon <= 0:
            raise ValueError("dims must be >= 1 and horizon > 0")


def _fgn_autocov(n: int, hurst: float) -> np.ndarray:
    """Autocovariance of unit-spacing fractional Gaussian noise at lags 0..n-1."""
    k = np.arange(n, dtype=np.float64)
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 + np.abs(k - 1) ** h2 - 2.0 * np.abs(k) ** h2)


def _fgn_circulant(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    """One fractional Gaussian noise sample of length n by circulant embedding.

    Returns None when the embedding has (numerically) negative eigenvalues, in
    which case the caller falls back to a dense Cholesky factor.
    """
    gamma = _fgn_autocov(n, hurst)
    row = np.concatenate([gamma, [0.0], gamma[-1:0:-1]])
    eig = np.fft.fft(row).real
    if eig.min() < -1e-9 * eig.max():
        return None
    eig = np.clip(eig, 0.0, None)
    m = 2 * n
    z = np.zeros(m, dtype=np.complex128)
    z[0] = rng.standard_normal()
    z[n] = rng.standard_normal()
    re = rng.standard_normal(n - 1)
    im = rng.standard_normal(n - 1)
    z[1:n] = (re + 1j * im) / np.sqrt(2.0)
    z[n + 1 :] = np.conj(z[1:n][::-1])
    return np.fft.ifft(np.sqrt(eig * m) * z).real[:n]


def _fgn_cholesky(n: int, hurst: float, rng: np.random.Generator) -> np.ndarray:
    gamma = _fgn_autocov(n, hurst)
    cov = gamma[np.abs(np.subtract.outer(np.arange(n), np.arange(n)))]
    chol = np.linalg.cholesky(cov)
    return chol @ rng.standard_normal(n)


def sample_fbm(cfg: FbmConfig) -> PathSamples:
    """d independent fractional Brownian components on [0, horizon].

    Circulant embedding (Davies-Harte) with a Cholesky fallback when the
    embedding fails numerically; deterministic given the seed.
    """
    n = cfg.n_increments
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    spacing = cfg.horizon / n
    values = np.zeros((n + 1, cfg.dims))
    for comp in range(cfg.dims):
        fgn = _fgn_circulant(n, cfg.hurst, rng)
        if fgn is None:
            logger.warning(
                "circulant embedding not nonnegative definite at H=%s, n=%s; "
                "falling back to Cholesky",
                cfg.hurst,
                n,
            )
            fgn = _fgn_cholesky(n, cfg.hurst, rng)
        values[1:, comp] = np.cumsum(fgn) * spacing**cfg.hurst
    times = np.linspace(0.0, cfg.horizon, n + 1)
    return PathSamples(times, values)


def write_path_csv(samples: PathSamples, path) -> None:
    """CSV with header time,x1..xd; values printed with 17 significant digits
    so the round trip is bitwise exact."""
    with open(path, "w", encoding="utf-8") as fh:
        header = ",".join(["time"] + [f"x{i + 1}" for i in range(samples.dim)])
        fh.write(header + "\n")
        for t, row in zip(samples.times, samples.values):
            fields = [format(t, ".17g")] + [format(v, ".17g") for v in row]
            fh.write(",".join(fields) + "\n")


def read_path_csv(path) -> PathSamples:
    """Parse a path CSV; the dimension is inferred from the column count."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise PathCsvError("line 1: missing header row")
    header = [c.strip() for c in lines[0].split(",")]
    if not header or header[0] != "time" or len(header) < 2:
        raise PathCsvError("line 1: header must be time,x1,...,xd")
    d = len(header) - 1
    times, values = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != d + 1:
            raise PathCsvError(f"line {lineno}: expected {d + 1} fields, got {len(fields)}")
        try:
            row = [float(f) for f in fields]
        except ValueError as err:
            raise PathCsvError(f"line {lineno}: {err}") from err
        times.append(row[0])
        values.append(row[1:])
    if not times:
        raise PathCsvError("line 2: no data rows")
    times = np.asarray(times)
    if not np.all(np.diff(times) > 0):
        bad = int(np.flatnonzero(np.diff(times) <= 0)[0])
        raise PathCsvError(f"line {bad + 3}: times must be strictly increasing")
    return PathSamples(times, np.asarray(values))
