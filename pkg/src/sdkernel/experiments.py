"""Experiment runner: pairwise method-agreement tables and scaling studies.

Emits machine-readable CSV with the full experiment settings in commented
header lines (# key: value JSON), columns fixed by the consuming plot scripts:

* pairwise table:  hurst,method_a,method_b,mae,std,n_paths,seed
* scaling study:   axis,value,runtime_seconds,memory_bytes,d,kappa,zeta,seed

For the scaling CSV, runtime_seconds measures the stage the axis exercises:
the DP solve stage for the grid and dimension axes, the signature-construction
stage for the block axis.  Compile-time preprocessing is never included in
runtime_seconds; it is logged separately.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from sdkernel.noise import FbmConfig, sample_fbm
from sdkernel.oracles import McConfig, sdkr_kernel, series_kernel
from sdkernel.roughpath import PathSamples, block_increments, signature_of_path
from sdkernel.solver import (
    CompiledScheme,
    SchemeConfig,
    SchemeConfigError,
    solve_kernel,
    zeta_min,
)

logger = logging.getLogger(__name__)

KNOWN_METHODS = ("SDK1", "SDK2", "SDK3", "SDKr", "SERIES")


class MemoryCapError(RuntimeError):
    """Predicted table memory exceeds the configured cap."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Settings of one benchmark run; JSON config files mirror these fields."""

    methods: tuple = ("SDK1", "SDK2", "SDK3")
    hursts: tuple = (0.85, 0.5, 0.255)
    n_paths: int = 20
    log2_fine: int = 10
    log2_coarse: int = 6
    dims: int = 3
    horizon: float = 1.0
    zetas: dict = field(default_factory=dict)  # method name -> zeta, default zeta_min
    matrix_dim: int = 200
    n_sims: int = 250
    series_level: int = 12
    seed: int = 0
    memory_cap_bytes: int = 1 << 30
    # compare whole kernel tables (max discrepancy over the grid) instead of
    # the terminal-time value; only the grid methods support it
    full_table: bool = False

    def __post_init__(self):
        if self.log2_coarse > self.log2_fine:
            raise ValueError("need log2_coarse <= log2_fine")
        for m in self.methods:
            if m not in KNOWN_METHODS:
                raise ValueError(f"unknown method {m!r}; known: {KNOWN_METHODS}")
        for m, z in self.zetas.items():
            kappa = _method_kappa(m)
            if kappa is not None and z < zeta_min(kappa):
                raise ValueError(f"zeta {z} for {m} below zeta_min {zeta_min(kappa)}")

    def zeta_for(self, method: str) -> int:
        kappa = _method_kappa(method)
        return self.zetas.get(method, zeta_min(kappa) if kappa else 0)

    @classmethod
    def from_json(cls, path) -> "ExperimentSpec":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        for key in ("methods", "hursts"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)

    def override(self, **kwargs) -> "ExperimentSpec":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def _method_kappa(method: str):
    return int(method[3:]) if method.startswith("SDK") and method[3:].isdigit() else None


def _path_seed(base: int, *indices: int) -> int:
    return int(np.random.SeedSequence([base, *indices]).generate_state(1)[0])


def _spec_header(spec: ExperimentSpec, extra: dict | None = None) -> str:
    payload = asdict(spec)
    payload.update(extra or {})
    return "# spec: " + json.dumps(payload, sort_keys=True, default=list) + "\n"


def terminal_kernel(method: str, spec: ExperimentSpec, path: PathSamples, mc_seed: int) -> float:
    """Terminal-time kernel value K(0, T) of one method on one path."""
    kappa = _method_kappa(method)
    if kappa is not None:
        cfg = SchemeConfig(spec.dims, kappa, spec.zeta_for(method))
        incs = block_increments(path, spec.log2_coarse, kappa)
        table = solve_kernel(incs, cfg)
        return table.trace(0, 2**spec.log2_coarse)
    if method == "SDKr":
        return sdkr_kernel(path, McConfig(spec.matrix_dim, spec.n_sims, mc_seed))
    if method == "SERIES":
        return series_kernel(signature_of_path(path, spec.series_level))
    raise ValueError(f"unknown method {method!r}")


def kernel_traces(method: str, spec: ExperimentSpec, path: PathSamples) -> np.ndarray:
    """Trace values of the whole triangular grid, for full-table comparison."""
    kappa = _method_kappa(method)
    if kappa is None:
        raise SchemeConfigError(f"{method} has no kernel table; full-table mode needs a grid method")
    cfg = SchemeConfig(spec.dims, kappa, spec.zeta_for(method))
    incs = block_increments(path, spec.log2_coarse, kappa)
    return solve_kernel(incs, cfg).data[:, 0].copy()


def run_pairwise_table(spec: ExperimentSpec, out_path=None) -> list[dict]:
    """Mean and std over paths of the terminal-time discrepancy, per method pair.

    A method whose configuration is invalid is reported and skipped; the run
    continues with the remaining pairs.  Self-pairs are included (exactly 0).
    """
    methods = []
    for m in spec.methods:
        kappa = _method_kappa(m)
        try:
            if kappa is not None:
                SchemeConfig(spec.dims, kappa, spec.zeta_for(m))
            elif spec.full_table:
                raise SchemeConfigError(f"{m} does not produce a table")
            methods.append(m)
        except SchemeConfigError as err:
            logger.warning("skipping %s: %s", m, err)

    values = {m: [] for m in methods}
    for h_idx, hurst in enumerate(spec.hursts):
        for p in range(spec.n_paths):
            fbm = FbmConfig(
                hurst=hurst,
                dims=spec.dims,
                n_increments=2**spec.log2_fine,
                horizon=spec.horizon,
                seed=_path_seed(spec.seed, h_idx, p),
            )
            path = sample_fbm(fbm)
            for m in methods:
                if spec.full_table:
                    values[m].append(kernel_traces(m, spec, path))
                else:
                    values[m].append(
                        terminal_kernel(m, spec, path, mc_seed=_path_seed(spec.seed, h_idx, p, 1))
                    )

    per_h = {m: np.reshape(values[m], (len(spec.hursts), spec.n_paths, -1)) for m in methods}
    rows = []
    for h_idx, hurst in enumerate(spec.hursts):
        for a_idx, ma in enumerate(methods):
            for mb in methods[a_idx:]:
                diff = np.abs(per_h[ma][h_idx] - per_h[mb][h_idx]).max(axis=1)
                std = float(np.std(diff, ddof=1)) if spec.n_paths > 1 else 0.0
                rows.append(
                    {
                        "hurst": hurst,
                        "method_a": ma,
                        "method_b": mb,
                        "mae": float(np.mean(diff)),
                        "std": std,
                        "n_paths": spec.n_paths,
                        "seed": spec.seed,
                    }
                )
    if out_path is not None:
        _write_csv(
            out_path,
            spec,
            ["hurst", "method_a", "method_b", "mae", "std", "n_paths", "seed"],
            rows,
        )
    return rows


def predicted_table_bytes(grid_size: int, total_dim: int) -> int:
    """Exact stored size of the triangular DP table, in bytes."""
    return (grid_size + 1) * (grid_size + 2) // 2 * total_dim * 8


def run_scaling(spec: ExperimentSpec, axis: str, axis_values, kappa: int = 2, out_path=None):
    """Wall-clock runtime and table memory along one axis (grid, block, dimension)."""
    if axis not in ("grid", "block", "dimension"):
        raise ValueError(f"axis must be grid, block or dimension, got {axis!r}")
    hurst = spec.hursts[0]
    rows = []
    for value in axis_values:
        if axis == "grid":
            n, m, d = int(value), max(int(value), spec.log2_fine), spec.dims
        elif axis == "block":
            # value = block size 2^(M-N): vary M at fixed N
            n = spec.log2_coarse
            m, d = n + int(value).bit_length() - 1, spec.dims
            if 2**(m - n) != int(value):
                raise ValueError(f"block size {value} is not a power of two")
        else:
            n, m, d = spec.log2_coarse, spec.log2_fine, int(value)
        zeta = spec.zetas.get(f"SDK{kappa}", zeta_min(kappa))
        cfg = SchemeConfig(d, kappa, zeta)
        t0 = time.perf_counter()
        scheme = CompiledScheme(cfg)
        compile_seconds = time.perf_counter() - t0
        predicted = predicted_table_bytes(2**n, scheme.indexer.total_dim)
        if predicted > spec.memory_cap_bytes:
            raise MemoryCapError(
                f"axis value {value}: predicted table memory {predicted} B "
                f"exceeds cap {spec.memory_cap_bytes} B"
            )
        path = sample_fbm(
            FbmConfig(hurst, d, 2**m, spec.horizon, _path_seed(spec.seed, n, m, d))
        )
        t0 = time.perf_counter()
        incs = block_increments(path, n, kappa)
        sig_seconds = time.perf_counter() - t0
        # warm through a small solve so JIT compilation never lands in a timing
        solve_kernel(incs[:1], scheme)
        t0 = time.perf_counter()
        table = solve_kernel(incs, scheme)
        solve_seconds = time.perf_counter() - t0
        assert table.memory_bytes == predicted
        logger.info(
            "axis=%s value=%s compile=%.3fs signature=%.3fs solve=%.3fs",
            axis, value, compile_seconds, sig_seconds, solve_seconds,
        )
        rows.append(
            {
                "axis": axis,
                "value": value,
                "runtime_seconds": sig_seconds if axis == "block" else solve_seconds,
                "memory_bytes": predicted,
                "d": d,
                "kappa": kappa,
                "zeta": zeta,
                "seed": spec.seed,
            }
        )
    if out_path is not None:
        _write_csv(
            out_path,
            spec,
            ["axis", "value", "runtime_seconds", "memory_bytes", "d", "kappa", "zeta", "seed"],
            rows,
            extra={"axis": axis, "kappa": kappa},
        )
    return rows


def _write_csv(path, spec, columns, rows, extra=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_spec_header(spec, extra))
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_field(row[c]) for c in columns) + "\n")


def _format_field(v) -> str:
    # repr is the shortest lossless float rendering, so reruns stay bitwise
    # identical and reports stay readable
    return repr(v) if isinstance(v, float) else str(v)
