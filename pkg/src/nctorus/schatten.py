"""Singular values, Schatten (quasi)norms, weak quasinorms, decay fits.

Everything here works on the sorted singular value sequence of a dense
complex matrix.  Diagonal matrices skip the SVD entirely (a sort of
absolute values suffices), which is what makes the N=40 potential-decay
runs instant.  Quasinorms with p < 1 accumulate in log space so tiny
singular values raised to small powers neither underflow nor drown the
sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .operators import OperatorMatrix

__all__ = [
    "SingularSpectrum",
    "singular_values",
    "schatten_norm",
    "weak_norm",
    "DecayFit",
    "decay_exponent",
    "default_decay_window",
    "critical_exponent",
]


@dataclass(frozen=True)
class SingularSpectrum:
    """Nonincreasing nonnegative singular values with their source dimension."""

    values: np.ndarray
    dimension: int

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float).reshape(-1)
        if arr.size != self.dimension:
            raise ValueError(
                f"spectrum has {arr.size} values, source dimension is {self.dimension}"
            )
        if arr.size and (np.any(arr < 0) or np.any(np.diff(arr) > 0)):
            raise ValueError("singular values must be nonnegative and nonincreasing")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.dimension


def singular_values(matrix) -> SingularSpectrum:
    """Singular values of a square matrix, sorted nonincreasing.

    Accepts an OperatorMatrix or a bare 2-d array.  Diagonal input is
    resolved by sorting absolute diagonal entries instead of an SVD.
    """
    if isinstance(matrix, OperatorMatrix):
        entries = matrix.entries
        diagonal = matrix.is_diagonal()
    else:
        entries = np.asarray(matrix, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {entries.shape}")
        diagonal = not np.any(entries[~np.eye(entries.shape[0], dtype=bool)])
    if not np.all(np.isfinite(entries)):
        raise ValueError("matrix has non-finite entries")
    if diagonal:
        vals = np.sort(np.abs(np.diag(entries)))[::-1]
    else:
        vals = np.linalg.svd(entries, compute_uv=False)
    return SingularSpectrum(vals, entries.shape[0])


def schatten_norm(spectrum: SingularSpectrum, p: float) -> float:
    """The ell_p (quasi)norm of the spectrum; p = inf gives the top value.

    For p < 1 this is a quasinorm, still defined by the same power sum.
    Computed as exp((1/p) logsumexp(p log mu)) so small p and tiny mu
    stay inside the representable range.
    """
    if not (p > 0):
        raise ValueError(f"Schatten exponent must be positive, got {p}")
    vals = spectrum.values
    if vals.size == 0 or vals[0] == 0.0:
        return 0.0
    if math.isinf(p):
        return float(vals[0])
    positive = vals[vals > 0]
    return float(np.exp(logsumexp(p * np.log(positive)) / p))


def weak_norm(spectrum: SingularSpectrum, p: float) -> float:
    """The weak quasinorm sup_k (k+1)^(1/p) mu(k)."""
    if not (p > 0):
        raise ValueError(f"weak exponent must be positive, got {p}")
    vals = spectrum.values
    if vals.size == 0:
        return 0.0
    ranks = np.arange(1, vals.size + 1, dtype=float)
    return float(np.max(ranks ** (1.0 / p) * vals))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares slope of log mu(k) vs log(k+1) and its RMS residual."""

    slope: float
    residual: float
    k_min: int
    k_max: int


def default_decay_window(length: int) -> tuple:
    """Window skipping the non-asymptotic head and truncation-polluted tail."""
    k_min = max(1, math.ceil(0.05 * length))
    k_max = math.floor(0.5 * length)
    return k_min, k_max


def decay_exponent(spectrum: SingularSpectrum, k_min: int, k_max: int) -> DecayFit:
    """Fit mu(k) ~ (k+1)^slope over k_min <= k <= k_max (inclusive)."""
    n = len(spectrum)
    if not (1 <= k_min < k_max < n):
        raise ValueError(
            f"window [{k_min}, {k_max}] invalid for a spectrum of length {n}"
        )
    vals = spectrum.values[k_min : k_max + 1]
    if np.any(vals == 0.0):
        raise ValueError(
            "zero singular value inside the fit window; shrink the window"
        )
    logx = np.log(np.arange(k_min + 1, k_max + 2, dtype=float))
    logy = np.log(vals)
    slope, intercept = np.polyfit(logx, logy, 1)
    fitted = slope * logx + intercept
    residual = float(np.sqrt(np.mean((logy - fitted) ** 2)))
    return DecayFit(float(slope), residual, int(k_min), int(k_max))


def critical_exponent(d: int, alpha1: float, alpha2: float) -> float:
    """The Schatten threshold 2d / (d + 2(alpha1 + alpha2))."""
    if not (isinstance(d, (int, np.integer)) and d >= 2):
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    if alpha1 < 0 or alpha2 < 0:
        raise ValueError(f"smoothness orders must be nonnegative, got ({alpha1}, {alpha2})")
    return 2.0 * d / (d + 2.0 * (alpha1 + alpha2))
