"""Hot DP loop of the table solver: numba-compiled with a numpy fallback.

Set SDKERNEL_NO_NUMBA=1 to force the numpy path (same arithmetic, vectorized
over the inner sums instead of JIT loops).  `benchmarks/backend_bench.py`
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_env = os.environ.get("SDKERNEL_NO_NUMBA", "").strip()
NUMBA_DISABLED = _env not in ("", "0", "false", "False")

if not NUMBA_DISABLED:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False


def _dp_fill_numpy(
    data,
    xr,
    mono_target,
    mono_left,
    mono_right,
    mono_rough,
    mono_coef,
    trace_col,
    trace_rough,
    trace_coef,
    lin_row,
    lin_col,
    lin_rough,
    lin_coef,
    g,
):
    D = data.shape[1]
    eye = np.eye(D)
    for j in range(g):
        A = np.zeros((D, D))
        np.add.at(A, (lin_row, lin_col), lin_coef * xr[j, lin_rough])
        np.add.at(A, (0, trace_col), trace_coef * xr[j, trace_rough])
        M = eye - A
        col_base = (j + 1) * (j + 2) // 2
        for i in range(j, -1, -1):
            b = np.zeros(D)
            b[0] = 1.0
            if j > i:
                ms = np.arange(i + 1, j + 1)
                kl = data[ms * (ms + 1) // 2 + i]
                kr = data[col_base + ms]
                xw = xr[ms - 1]
                per = (
                    kl[:, mono_left] * kr[:, mono_right] * xw[:, mono_rough]
                ).sum(axis=0) * mono_coef
                b += np.bincount(mono_target, weights=per, minlength=D)
                b[0] += float(
                    ((kl[:, trace_col] * xw[:, trace_rough]).sum(axis=0) * trace_coef).sum()
                )
            data[col_base + i] = np.linalg.solve(M, b)
    return data


def _dp_fill_loops(
    data,
    xr,
    mono_target,
    mono_left,
    mono_right,
    mono_rough,
    mono_coef,
    trace_col,
    trace_rough,
    trace_coef,
    lin_row,
    lin_col,
    lin_rough,
    lin_coef,
    g,
):
    D = data.shape[1]
    n_mono = mono_coef.shape[0]
    n_trace = trace_coef.shape[0]
    n_lin = lin_coef.shape[0]
    eye = np.eye(D)
    for j in range(g):
        A = np.zeros((D, D))
        for t in range(n_lin):
            A[lin_row[t], lin_col[t]] += lin_coef[t] * xr[j, lin_rough[t]]
        for t in range(n_trace):
            A[0, trace_col[t]] += trace_coef[t] * xr[j, trace_rough[t]]
        M = eye - A
        col_base = (j + 1) * (j + 2) // 2
        for i in range(j, -1, -1):
            b = np.zeros(D)
            b[0] = 1.0
            for m in range(i + 1, j + 1):
                cl = m * (m + 1) // 2 + i
                cr = col_base + m
                for t in range(n_trace):
                    b[0] += trace_coef[t] * data[cl, trace_col[t]] * xr[m - 1, trace_rough[t]]
                for t in range(n_mono):
                    b[mono_target[t]] += (
                        mono_coef[t]
                        * data[cl, mono_left[t]]
                        * data[cr, mono_right[t]]
                        * xr[m - 1, mono_rough[t]]
                    )
            data[col_base + i] = np.linalg.solve(M, b)
    return data


if HAVE_NUMBA:
    dp_fill = njit(cache=True)(_dp_fill_loops)
else:
    dp_fill = _dp_fill_numpy

dp_fill_numpy = _dp_fill_numpy


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
