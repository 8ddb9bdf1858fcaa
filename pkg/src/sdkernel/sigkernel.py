"""Signature kernels of smooth rough paths via the truncated Goursat system.

The kernel f(t, v) = <S(X), S(Y)> is marched on a rectangular grid together
with two auxiliary coordinate maps: phi holds the coefficients of S(X)
contracted against S(Y) extended by a word (levels < lambda), psi the mirror
image (levels < kappa).  With per-block diagonal derivatives x, y the system

    d2f/dtdv  = f <x, y> + phi[R*_x y] + psi[R*_y x]
    dphi/dt   = f x + phi o R*_x + L*_psi x
    dpsi/dv   = f y + psi o R*_y + L*_phi y

closes exactly at those truncations (the empty-word components of phi and psi
vanish identically and are pinned to zero).  f is updated with the standard
implicit midpoint (Goursat) cell rule, phi and psi by first-order forward
marching; boundaries are set exactly from the truncated signatures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sdkernel.roughpath import GroupIncrement, tensor_exp, tensor_log
from sdkernel.words import DimensionError, TensorCoeffs, concat_mul, indexer, pairing


@dataclass
class DiagonalDerivativePath:
    """Piecewise-constant truncated Lie derivative of a smooth rough path.

    One coefficient row per coarse block (empty-word entry zero), in units of
    per unit time, plus the block durations.
    """

    indexer_: object
    coeffs: np.ndarray  # (n_blocks, total_dim)
    durations: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=np.float64))
        self.durations = np.asarray(self.durations, dtype=np.float64)
        if self.coeffs.shape[1] != self.indexer_.total_dim:
            raise DimensionError("coefficient rows do not match the indexer")
        if len(self.durations) != len(self.coeffs):
            raise ValueError("one duration per block required")
        if np.any(self.coeffs[:, 0] != 0.0):
            raise ValueError("diagonal derivatives must have zero empty-word part")

    @property
    def n_blocks(self) -> int:
        return len(self.coeffs)

    @property
    def level(self) -> int:
        return self.indexer_.max_level

    @property
    def dim(self) -> int:
        return self.indexer_.dim

    def block(self, b: int) -> TensorCoeffs:
        return TensorCoeffs(self.indexer_, self.coeffs[b].copy())


def diagonal_derivative(blocks: list[GroupIncrement], durations=None) -> DiagonalDerivativePath:
    """Per-block tensor logarithm of the increments, divided by block duration."""
    if durations is None:
        durations = [g.interval[1] - g.interval[0] for g in blocks]
    durations = np.asarray(durations, dtype=np.float64)
    ix = blocks[0].coeffs.indexer
    rows = np.empty((len(blocks), ix.total_dim))
    for b, g in enumerate(blocks):
        if g.coeffs.indexer != ix:
            raise DimensionError("all blocks must share one truncation level")
        rows[b] = tensor_log(g.coeffs).coeffs / durations[b]
    return DiagonalDerivativePath(ix, rows, durations)


def truncated_inner_kernel(sig_x: GroupIncrement, sig_y: GroupIncrement) -> float:
    """Inner product of two truncated signatures over all shared words."""
    if sig_x.coeffs.indexer != sig_y.coeffs.indexer:
        raise DimensionError("signatures must share alphabet and level")
    return pairing(sig_x.coeffs, sig_y.coeffs)


@dataclass
class KernelGridState:
    """Grid values of the kernel f and the auxiliary maps phi, psi."""

    t_nodes: np.ndarray
    v_nodes: np.ndarray
    f: np.ndarray  # (nt+1, nv+1)
    phi: np.ndarray  # (nt+1, nv+1, dim T^{<lambda})
    psi: np.ndarray  # (nt+1, nv+1, dim T^{<kappa})

    @property
    def value(self) -> float:
        """Kernel at the far corner (full time horizons)."""
        return float(self.f[-1, -1])


def _suffix_matrix(x: TensorCoeffs, state_ix) -> np.ndarray:
    """M[w, w'] = x^(v) summed over nonempty suffix splits w = w' v."""
    n = state_ix.total_dim
    out = np.zeros((n, n))
    for w_ix in range(n):
        w = state_ix.word(w_ix)
        for cut in range(len(w)):
            suffix = w[cut:]
            if len(suffix) <= x.indexer.max_level:
                out[w_ix, state_ix.index(w[:cut])] += x[suffix]
    return out


def _prepend_matrix(x: TensorCoeffs, row_ix, col_ix) -> np.ndarray:
    """M[w, g] = x^(g w) wherever the combined word fits x's level."""
    out = np.zeros((row_ix.total_dim, col_ix.total_dim))
    for w_ix in range(row_ix.total_dim):
        w = row_ix.word(w_ix)
        for g_ix in range(col_ix.total_dim):
            g = col_ix.word(g_ix)
            if len(g) + len(w) <= x.indexer.max_level:
                out[w_ix, g_ix] = x[g + w]
    return out


def _projected(x: TensorCoeffs, target_ix) -> np.ndarray:
    """Coefficients of x on target_ix's words (zero beyond x's level)."""
    out = np.zeros(target_ix.total_dim)
    n = min(len(out), x.indexer.total_dim)
    out[:n] = x.coeffs[:n]
    return out


def _cross_contraction(x: TensorCoeffs, y: TensorCoeffs, target_ix) -> np.ndarray:
    """r[g] = sum_v x^(v) y^(g v) over nonempty v, for words g of target_ix."""
    out = np.zeros(target_ix.total_dim)
    for g_ix in range(target_ix.total_dim):
        g = target_ix.word(g_ix)
        total = 0.0
        for vlen in range(1, x.indexer.max_level + 1):
            if len(g) + vlen > y.indexer.max_level:
                break
            for v in x.indexer.words(vlen):
                total += x[v] * y[g + v]
        out[g_ix] = total
    return out


def _boundary_signature(deriv: DiagonalDerivativePath, substeps: int, level: int) -> np.ndarray:
    """Exact signature coefficients (level-truncated) at every grid node along
    one axis, empty-word entry zeroed: the phi/psi boundary rows."""
    ix = indexer(deriv.dim, level)
    n_nodes = deriv.n_blocks * substeps + 1
    out = np.zeros((n_nodes, ix.total_dim))
    g = TensorCoeffs.unit(ix)
    out[0] = g.coeffs
    node = 1
    for b in range(deriv.n_blocks):
        lie = TensorCoeffs(ix, _projected(deriv.block(b), ix))
        lie.coeffs *= deriv.durations[b] / substeps
        step = tensor_exp(lie)
        for _ in range(substeps):
            g = TensorCoeffs(ix, concat_mul(g, step).coeffs)
            out[node] = g.coeffs
            node += 1
    out[:, 0] = 0.0
    return out


def integrate_system(
    x: DiagonalDerivativePath, y: DiagonalDerivativePath, substeps: int = 1
) -> KernelGridState:
    """March the truncated system over the full rectangle.

    Each block is subdivided into `substeps` uniform steps per axis.  phi and
    psi advance by forward Euler along their own directions; f uses the
    implicit four-corner midpoint rule on each cell.
    """
    if x.dim != y.dim:
        raise DimensionError("paths must share an alphabet")
    kappa, lam = x.level, y.level
    phi_ix = indexer(x.dim, lam - 1)
    psi_ix = indexer(x.dim, kappa - 1)

    nt = x.n_blocks * substeps
    nv = y.n_blocks * substeps
    t_nodes = np.concatenate(
        [[0.0], np.cumsum(np.repeat(x.durations / substeps, substeps))]
    )
    v_nodes = np.concatenate(
        [[0.0], np.cumsum(np.repeat(y.durations / substeps, substeps))]
    )

    # per-block operator tables
    xs = [x.block(b) for b in range(x.n_blocks)]
    ys = [y.block(b) for b in range(y.n_blocks)]
    rx = [_suffix_matrix(xb, phi_ix) for xb in xs]
    nx = [_prepend_matrix(xb, phi_ix, psi_ix) for xb in xs]
    xvec = [_projected(xb, phi_ix) for xb in xs]
    ry = [_suffix_matrix(yb, psi_ix) for yb in ys]
    ny = [_prepend_matrix(yb, psi_ix, phi_ix) for yb in ys]
    yvec = [_projected(yb, psi_ix) for yb in ys]
    inner = np.array(
        [[pairing_common(xb, yb) for yb in ys] for xb in xs]
    )
    r_xy = [[_cross_contraction(xb, yb, phi_ix) for yb in ys] for xb in xs]
    r_yx = [[_cross_contraction(yb, xb, psi_ix) for yb in ys] for xb in xs]

    f = np.ones((nt + 1, nv + 1))
    phi = np.zeros((nt + 1, nv + 1, phi_ix.total_dim))
    psi = np.zeros((nt + 1, nv + 1, psi_ix.total_dim))
    phi[:, 0] = _boundary_signature(x, substeps, lam - 1)
    psi[0, :] = _boundary_signature(y, substeps, kappa - 1)

    for i in range(nt):
        bx = i // substeps
        dt = x.durations[bx] / substeps
        for j in range(nv):
            by = j // substeps
            dv = y.durations[by] / substeps
            # forward marches into the new node (empty-word parts stay 0)
            phi_new = phi[i, j + 1] + dt * (
                f[i, j + 1] * xvec[bx] + rx[bx] @ phi[i, j + 1] + nx[bx] @ psi[i, j + 1]
            )
            phi_new[0] = 0.0
            psi_new = psi[i + 1, j] + dv * (
                f[i + 1, j] * yvec[by] + ry[by] @ psi[i + 1, j] + ny[by] @ phi[i + 1, j]
            )
            psi_new[0] = 0.0
            phi[i + 1, j + 1] = phi_new
            psi[i + 1, j + 1] = psi_new

            c = inner[bx, by]
            phi_avg = (phi[i, j] + phi[i + 1, j] + phi[i, j + 1] + phi_new) / 4.0
            psi_avg = (psi[i, j] + psi[i + 1, j] + psi[i, j + 1] + psi_new) / 4.0
            rhs = (
                f[i + 1, j]
                + f[i, j + 1]
                - f[i, j]
                + dt
                * dv
                * (
                    c * (f[i, j] + f[i + 1, j] + f[i, j + 1]) / 4.0
                    + phi_avg @ r_xy[bx][by]
                    + psi_avg @ r_yx[bx][by]
                )
            )
            f[i + 1, j + 1] = rhs / (1.0 - dt * dv * c / 4.0)

    return KernelGridState(t_nodes, v_nodes, f, phi, psi)


def pairing_common(a: TensorCoeffs, b: TensorCoeffs) -> float:
    """Inner product over the words both truncations share."""
    n = min(a.indexer.total_dim, b.indexer.total_dim)
    return float(a.coeffs[:n] @ b.coeffs[:n])


def geodesic_signature(deriv: DiagonalDerivativePath, level: int) -> GroupIncrement:
    """Exact level-`level` signature of the path the derivative generates
    (blockwise exponentials, Chen-multiplied)."""
    ix = indexer(deriv.dim, level)
    g = TensorCoeffs.unit(ix)
    for b in range(deriv.n_blocks):
        lie = TensorCoeffs(ix, _projected(deriv.block(b), ix))
        lie.coeffs *= deriv.durations[b]
        g = concat_mul(g, tensor_exp(lie))
    total = float(np.sum(deriv.durations))
    return GroupIncrement(g, (0.0, total))
