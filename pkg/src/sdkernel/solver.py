"""Dynamic-programming solver for the Schwinger-Dyson kernel (SDK-kappa).

The update polynomials are compiled once per (d, kappa, zeta): every target
word I of length <= kappa + zeta gets a list of monomials
(coef, left word J1, right word J2, rough word), realizing the split of the
defining integral at the midpoint letter of I, with both factors expanded into
base coordinates through non-crossing matchings.  The trace row is handled by
a separate empty-word rule.  At runtime the triangular table K(i, j) is filled
column by column, solving a dense D x D system (Id - A_j) K(i, j+1) = b per
cell; A_j collects the monomials whose right factor sits at the diagonal and
does not depend on i.

Two sign/orientation conventions are compiled:

* ``consistent`` (default): the quadrature of each update integral is expanded
  at the right endpoint of every step, which flips the sign of every
  even-length compensator word, reverses the shared inverse-shuffle word
  inside the rough-path coefficient, and takes the right factor's expansion
  with the derivative letters prepended reversed under a suffix restriction.
  One-step error is O(h^{kappa+1}); this is the variant that agrees with the
  moment-series oracle under grid refinement.
* ``literal``: plain right-endpoint sums without the orientation corrections.
  Kept for reference; first-order accurate only.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from math import ceil

import numpy as np

from sdkernel import _kernels
from sdkernel.matchings import gubinelli_expand, gubinelli_expand_suffix
from sdkernel.roughpath import GroupIncrement
from sdkernel.words import TensorCoeffs, indexer, inverse_shuffle


class SchemeConfigError(ValueError):
    """Truncation levels do not close the update system."""


class StepSizeError(RuntimeError):
    """(Id - A_j) was singular; the grid increment is too large."""


class DpOrderError(RuntimeError):
    """A table entry was read before being solved."""


def zeta_min(kappa: int) -> int:
    """Smallest extension level closing the system: kappa - 3 if kappa >= 4, else 0."""
    if kappa < 1:
        raise ValueError(f"need kappa >= 1, got {kappa}")
    return kappa - 3 if kappa >= 4 else 0


@dataclass(frozen=True)
class SchemeConfig:
    """Alphabet size, rough-path level and tensor extension of one solver."""

    d: int
    kappa: int
    zeta: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise SchemeConfigError(f"need d >= 1, got {self.d}")
        if self.kappa < 1:
            raise SchemeConfigError(f"need kappa >= 1, got {self.kappa}")
        if self.zeta < zeta_min(self.kappa):
            raise SchemeConfigError(
                f"zeta={self.zeta} below zeta_min({self.kappa}) = {zeta_min(self.kappa)}"
            )
        if max((self.kappa + self.zeta) // 2, 1) + self.kappa - 1 > self.kappa + self.zeta:
            raise SchemeConfigError(
                f"levels kappa={self.kappa}, zeta={self.zeta} do not close the system"
            )

    @property
    def level(self) -> int:
        return self.kappa + self.zeta


class CompiledScheme:
    """Monomial lists of the update rules, flattened into index arrays."""

    def __init__(self, cfg: SchemeConfig, convention: str = "consistent"):
        if convention not in ("consistent", "literal"):
            raise ValueError(f"unknown convention {convention!r}")
        self.cfg = cfg
        self.convention = convention
        self.indexer = indexer(cfg.d, cfg.level)
        self.rough_indexer = indexer(cfg.d, cfg.kappa)
        self._compile()

    # -- compilation ---------------------------------------------------------

    def _word_monomials(self):
        """(target, J1, J2, rough) -> coefficient for all non-empty targets."""
        cfg, ix = self.cfg, self.indexer
        literal = self.convention == "literal"
        acc: dict = {}
        for n in range(1, cfg.level + 1):
            for target in ix.words(n):
                ell = ceil(n / 2)
                left_base = target[: ell - 1]
                letter = target[ell - 1]
                right_base = target[ell:]
                t_ix = ix.index(target)
                for wlen in range(cfg.kappa):
                    for omega in self.rough_indexer.words(wlen):
                        rough = (letter,) + (omega if literal else omega[::-1])
                        rough_ix = self.rough_indexer.index(rough)
                        for alpha, beta in inverse_shuffle(omega):
                            if literal:
                                sign0 = (-1) ** (len(beta) + 1)
                                right_terms = gubinelli_expand(
                                    right_base + beta, len(right_base)
                                )
                            else:
                                sign0 = (-1) ** (wlen + len(beta) + 1)
                                right_terms = gubinelli_expand_suffix(
                                    beta[::-1] + right_base, len(right_base)
                                )
                            left_terms = gubinelli_expand(left_base + alpha, len(left_base))
                            for lt in left_terms:
                                l_ix = ix.index(lt.residual_word)
                                for rt in right_terms:
                                    key = (t_ix, l_ix, ix.index(rt.residual_word), rough_ix)
                                    acc[key] = acc.get(key, 0.0) + sign0 * lt.sign * rt.sign
        return {k: v for k, v in acc.items() if v != 0.0}

    def _trace_terms(self):
        """(column word, rough word) -> coefficient for the empty-word rule."""
        cfg = self.cfg
        literal = self.convention == "literal"
        acc: dict = {}
        for wlen in range(1, cfg.kappa + 1):
            for omega in self.rough_indexer.words(wlen):
                sign0 = 1.0 if literal else (-1.0) ** (wlen + 1)
                rough = omega if literal else omega[::-1]
                rough_ix = self.rough_indexer.index(rough)
                for term in gubinelli_expand(omega, 0):
                    key = (self.indexer.index(term.residual_word), rough_ix)
                    acc[key] = acc.get(key, 0.0) + sign0 * term.sign
        return {k: v for k, v in acc.items() if v != 0.0}

    def _compile(self):
        monos = self._word_monomials()
        keys = sorted(monos)
        self.mono_target = np.array([k[0] for k in keys], dtype=np.int64)
        self.mono_left = np.array([k[1] for k in keys], dtype=np.int64)
        self.mono_right = np.array([k[2] for k in keys], dtype=np.int64)
        self.mono_rough = np.array([k[3] for k in keys], dtype=np.int64)
        self.mono_coef = np.array([monos[k] for k in keys], dtype=np.float64)

        # right-linear sub-list: right factor at the diagonal collapses to its
        # empty-word coefficient, so only J2 = empty survives
        lin = self.mono_right == 0
        self.lin_row = self.mono_target[lin].copy()
        self.lin_col = self.mono_left[lin].copy()
        self.lin_rough = self.mono_rough[lin].copy()
        self.lin_coef = self.mono_coef[lin].copy()

        trace = self._trace_terms()
        tkeys = sorted(trace)
        self.trace_col = np.array([k[0] for k in tkeys], dtype=np.int64)
        self.trace_rough = np.array([k[1] for k in tkeys], dtype=np.int64)
        self.trace_coef = np.array([trace[k] for k in tkeys], dtype=np.float64)

    # -- runtime -------------------------------------------------------------

    @property
    def n_monomials(self) -> int:
        return len(self.mono_coef)

    def monomials(self, target) -> list:
        """(coef, left, right, rough) words for one target; for inspection."""
        t_ix = self.indexer.index(tuple(target))
        out = []
        for p in range(self.n_monomials):
            if self.mono_target[p] == t_ix:
                out.append(
                    (
                        float(self.mono_coef[p]),
                        self.indexer.word(int(self.mono_left[p])),
                        self.indexer.word(int(self.mono_right[p])),
                        self.rough_indexer.word(int(self.mono_rough[p])),
                    )
                )
        return out

    def assemble_A(self, j: int, xr: np.ndarray, cache: dict | None = None) -> np.ndarray:
        """Dense D x D matrix of the m = j+1 (diagonal right factor) terms.

        xr is the (G, D_rough) matrix of increment coefficients.  Pass a dict
        to cache per j across the cells of one solve (A_j does not depend on i).
        """
        if cache is not None and j in cache:
            return cache[j]
        D = self.indexer.total_dim
        A = np.zeros((D, D))
        np.add.at(A, (self.lin_row, self.lin_col), self.lin_coef * xr[j, self.lin_rough])
        np.add.at(A, (0, self.trace_col), self.trace_coef * xr[j, self.trace_rough])
        if cache is not None:
            cache[j] = A
        return A


def increments_matrix(increments, scheme: CompiledScheme) -> np.ndarray:
    """Stack increment coefficients at the scheme's rough level into (G, D_rough)."""
    dr = scheme.rough_indexer.total_dim
    out = np.empty((len(increments), dr))
    for j, g in enumerate(increments):
        coeffs = g.coeffs if isinstance(g, GroupIncrement) else g
        if coeffs.indexer.dim != scheme.cfg.d:
            raise SchemeConfigError("increment dimension does not match the scheme")
        if coeffs.indexer.max_level < scheme.cfg.kappa:
            raise SchemeConfigError(
                f"increments at level {coeffs.indexer.max_level} < kappa {scheme.cfg.kappa}"
            )
        out[j] = coeffs.coeffs[:dr]
    return out


class KernelTable:
    """Triangular grid of tensor coefficients K(i, j), 0 <= i <= j <= G.

    Stored packed (exactly (G+1)(G+2)/2 cells of D reals) with cell (i, j) at
    flat row j (j + 1) / 2 + i.
    """

    def __init__(self, grid_size: int, scheme: CompiledScheme):
        self.grid_size = grid_size
        self.scheme = scheme
        self.indexer = scheme.indexer
        n_cells = (grid_size + 1) * (grid_size + 2) // 2
        self.data = np.zeros((n_cells, self.indexer.total_dim))
        self.filled = np.zeros(n_cells, dtype=bool)
        for i in range(grid_size + 1):
            self.data[self.cell(i, i), 0] = 1.0
            self.filled[self.cell(i, i)] = True

    def cell(self, i: int, j: int) -> int:
        if not 0 <= i <= j <= self.grid_size:
            raise IndexError(f"cell ({i}, {j}) outside the triangle")
        return j * (j + 1) // 2 + i

    def coeffs(self, i: int, j: int) -> TensorCoeffs:
        return TensorCoeffs(self.indexer, self.data[self.cell(i, j)].copy())

    def trace(self, i: int, j: int) -> float:
        return float(self.data[self.cell(i, j), 0])

    @property
    def memory_bytes(self) -> int:
        return self.data.size * 8

    def dump(self, path):
        """Binary dump: little-endian u32 header (d, kappa, zeta, N), then the
        triangle row-major ((i, j) with i outer), D doubles per cell."""
        cfg = self.scheme.cfg
        n = self.grid_size.bit_length() - 1 if self.grid_size > 0 else 0
        with open(path, "wb") as fh:
            fh.write(struct.pack("<4I", cfg.d, cfg.kappa, cfg.zeta, n))
            for i in range(self.grid_size + 1):
                for j in range(i, self.grid_size + 1):
                    fh.write(self.data[self.cell(i, j)].tobytes())


def assemble_b(i: int, j: int, table: KernelTable, xr: np.ndarray, scheme: CompiledScheme):
    """Known side of the cell (i, j+1) system: the constant 1 on the trace row
    plus all m <= j products of already-solved entries."""
    D = scheme.indexer.total_dim
    b = np.zeros(D)
    b[0] = 1.0
    if j < i:
        raise DpOrderError(f"cell ({i}, {j + 1}) is below the diagonal")
    if j == i:
        return b
    ms = np.arange(i + 1, j + 1)
    left_cells = ms * (ms + 1) // 2 + i
    right_cells = (j + 1) * (j + 2) // 2 + ms
    if not (table.filled[left_cells].all() and table.filled[right_cells].all()):
        raise DpOrderError(f"cell ({i}, {j + 1}) reads unsolved entries")
    kl = table.data[left_cells]
    kr = table.data[right_cells]
    xw = xr[ms - 1]
    per = (kl[:, scheme.mono_left] * kr[:, scheme.mono_right] * xw[:, scheme.mono_rough]).sum(
        axis=0
    ) * scheme.mono_coef
    b += np.bincount(scheme.mono_target, weights=per, minlength=D)
    b[0] += float(
        ((kl[:, scheme.trace_col] * xw[:, scheme.trace_rough]).sum(axis=0) * scheme.trace_coef).sum()
    )
    return b


def solve_kernel(increments, cfg, convention: str = "consistent") -> KernelTable:
    """Fill the whole table for a sequence of level-kappa increments.

    Columns are processed left to right and cells top-up (i descending), so
    every value read by the right-hand side is already final.  Raises
    StepSizeError when (Id - A_j) is singular; refine the grid in that case.
    """
    scheme = cfg if isinstance(cfg, CompiledScheme) else CompiledScheme(cfg)
    xr = increments_matrix(increments, scheme)
    g = len(increments)
    table = KernelTable(g, scheme)
    try:
        _kernels.dp_fill(
            table.data,
            xr,
            scheme.mono_target,
            scheme.mono_left,
            scheme.mono_right,
            scheme.mono_rough,
            scheme.mono_coef,
            scheme.trace_col,
            scheme.trace_rough,
            scheme.trace_coef,
            scheme.lin_row,
            scheme.lin_col,
            scheme.lin_rough,
            scheme.lin_coef,
            g,
        )
    except np.linalg.LinAlgError as err:
        raise StepSizeError(
            "singular (Id - A_j): a grid increment is too large; rerun on a finer grid"
        ) from err
    table.filled[:] = True
    return table
