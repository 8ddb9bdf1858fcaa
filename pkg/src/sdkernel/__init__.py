"""Kernels of rough driving signals.

Computes the Schwinger-Dyson kernel of a sampled path by a level-kappa
dynamic-programming scheme on the truncated tensor algebra, cross-checks it
against a semicircular moment-series contraction and a randomized unitary
development Monte Carlo, and computes signature kernels through the truncated
Goursat system.
"""

from sdkernel.words import Word, WordIndexer, TensorCoeffs
from sdkernel.matchings import (
    PartialMatching,
    enumerate_nc,
    nc_cardinality,
    semicircular_moment,
    gubinelli_expand,
)
from sdkernel.roughpath import PathSamples, GroupIncrement
from sdkernel.solver import SchemeConfig, CompiledScheme, KernelTable, zeta_min
from sdkernel.oracles import McConfig

__all__ = [
    "Word",
    "WordIndexer",
    "TensorCoeffs",
    "PartialMatching",
    "enumerate_nc",
    "nc_cardinality",
    "semicircular_moment",
    "gubinelli_expand",
    "PathSamples",
    "GroupIncrement",
    "SchemeConfig",
    "CompiledScheme",
    "KernelTable",
    "zeta_min",
    "McConfig",
]
