"""Query-adaptive dynamic bitvectors, fixed-width arrays and wavelet matrices.

The core structure is a weight-balanced multiway tree of bit leaves that
converts query-hot subtrees into immutable constant-time leaves and splits
them back on update, so per-operation cost tracks the update rate of the
workload instead of its size alone.
"""

from .bitvector import AdaptiveBitvector, SpaceReport
from .engine import LifetimeStats
from .fixed_array import AdaptiveArray
from .oracle import NaiveBits, NaiveCells, NaiveSeq
from .params import Params, ceil_log2, compute_params, rebuild_due
from .wavelet import AdaptiveWaveletMatrix

__all__ = [
    "AdaptiveBitvector",
    "AdaptiveArray",
    "AdaptiveWaveletMatrix",
    "LifetimeStats",
    "SpaceReport",
    "NaiveBits",
    "NaiveCells",
    "NaiveSeq",
    "Params",
    "compute_params",
    "rebuild_due",
    "ceil_log2",
]

__version__ = "0.1.0"
