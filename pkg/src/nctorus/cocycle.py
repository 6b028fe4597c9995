"""Deformation data and the bicharacter phase twisting the group algebra.

A real skew-symmetric d x d matrix theta is reduced to its strictly lower
triangle.  The reduced matrix R drives the unimodular pairing

    sigma(m, n) = exp(2 pi i  m . R . n)

on pairs of lattice indices.  sigma is a bicharacter in each slot and
satisfies the 2-cocycle identity, which is exactly what makes the twisted
convolution associative.  The phase argument is reduced mod 1 before
scaling by 2 pi so large indices do not lose accuracy.
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import as_multi_index

__all__ = [
    "SKEW_TOLERANCE",
    "ThetaMatrix",
    "ReducedTheta",
    "reduce_theta",
    "sigma",
    "phase_pairs",
    "phase_table",
    "theta_from_json",
    "load_theta",
    "zero_theta",
    "random_theta",
]

SKEW_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ThetaMatrix:
    """Real skew-symmetric deformation matrix, d >= 2."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"theta must be a square matrix, got shape {arr.shape}")
        d = arr.shape[0]
        if d < 2:
            raise ValueError(f"theta must have dimension >= 2, got d={d}")
        if not np.all(np.isfinite(arr)):
            j, k = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(f"theta[{j}][{k}] = {arr[j, k]} is not finite")
        for j in range(d):
            if abs(arr[j, j]) > SKEW_TOLERANCE:
                raise ValueError(
                    f"theta[{j}][{j}] = {arr[j, j]!r} exceeds the diagonal "
                    f"tolerance {SKEW_TOLERANCE}"
                )
        for j in range(d):
            for k in range(j + 1, d):
                defect = arr[j, k] + arr[k, j]
                if abs(defect) > SKEW_TOLERANCE:
                    raise ValueError(
                        f"theta[{j}][{k}] + theta[{k}][{j}] = {defect!r} exceeds the "
                        f"skew-symmetry tolerance {SKEW_TOLERANCE}"
                    )
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThetaMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.entries.shape, self.entries.tobytes()))


@dataclass(frozen=True, eq=False)
class ReducedTheta:
    """Strictly lower-triangular reduction of a skew-symmetric theta."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"reduced theta must be square, got shape {arr.shape}")
        if arr.shape[0] < 2:
            raise ValueError(f"reduced theta must have dimension >= 2, got d={arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("reduced theta has non-finite entries")
        upper = np.triu(arr)
        if np.any(upper != 0.0):
            j, k = np.argwhere(upper != 0.0)[0]
            raise ValueError(
                f"reduced theta must be strictly lower triangular, "
                f"entry [{j}][{k}] = {arr[j, k]!r} is nonzero"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReducedTheta):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.entries.shape, self.entries.tobytes()))


def reduce_theta(theta: ThetaMatrix) -> ReducedTheta:
    """Keep the strictly lower triangle of theta, zero everything else."""
    return ReducedTheta(np.tril(theta.entries, k=-1))


def zero_theta(d: int) -> ReducedTheta:
    """Reduced theta of the commutative (untwisted) torus."""
    return ReducedTheta(np.zeros((d, d)))


def random_theta(d: int, rng: np.random.Generator, scale: float = 0.5) -> ThetaMatrix:
    """Random skew-symmetric theta with entries of size about `scale`."""
    a = rng.uniform(-scale, scale, size=(d, d))
    return ThetaMatrix(a - a.T)


def _unit_phases(args: np.ndarray) -> np.ndarray:
    # reduce mod 1 before scaling by 2 pi: keeps unit modulus for large indices
    return np.exp(2j * np.pi * np.mod(args, 1.0))


def phase_pairs(matrix: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Pairwise phases exp(2 pi i left[i] . matrix . right[i]), shape (n,)."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    args = np.einsum("id,de,ie->i", left, matrix, right)
    return _unit_phases(args)


def phase_table(matrix: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Full table exp(2 pi i left[i] . matrix . right[j]), shape (n_left, n_right)."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    args = left @ matrix @ right.T
    return _unit_phases(args)


def sigma(theta: ReducedTheta, m, n) -> complex:
    """The cocycle phase exp(2 pi i m . theta_reduced . n) for a single pair."""
    mm = as_multi_index(m)
    nn = as_multi_index(n)
    if mm.shape[0] != theta.d or nn.shape[0] != theta.d:
        raise ValueError(
            f"index dimensions ({mm.shape[0]}, {nn.shape[0]}) do not match theta d={theta.d}"
        )
    return complex(phase_pairs(theta.entries, mm[None, :], nn[None, :])[0])


def theta_from_json(doc: dict) -> ThetaMatrix:
    """Build a ThetaMatrix from {"d": int, "theta": [[row], ...]}.

    Validation errors name the offending entry.
    """
    if not isinstance(doc, dict):
        raise ValueError(f"theta document must be a JSON object, got {type(doc).__name__}")
    for key in ("d", "theta"):
        if key not in doc:
            raise ValueError(f"theta document missing key {key!r}")
    d = doc["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValueError(f"'d' must be an integer >= 2, got {d!r}")
    rows = doc["theta"]
    if not isinstance(rows, list) or len(rows) != d:
        n = len(rows) if isinstance(rows, list) else f"a {type(rows).__name__}"
        raise ValueError(f"'theta' has {n} rows, expected {d}")
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            n = len(row) if isinstance(row, list) else f"a {type(row).__name__}"
            raise ValueError(f"theta[{j}] has {n} entries, expected {d}")
        for k, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, numbers.Real):
                raise ValueError(f"theta[{j}][{k}] = {v!r} is not a real number")
    return ThetaMatrix(np.array(rows, dtype=float))


def load_theta(path: str | Path) -> ThetaMatrix:
    """Read a theta JSON document from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return theta_from_json(doc)
