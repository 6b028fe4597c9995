"""Truncated integer lattices Z^d intersected with [-N, N]^d.

Every matrix and coefficient vector in this package is indexed by the
points of such a box, enumerated in a single canonical order, so the
index bijections here are the ground truth for everything built on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = ["LatticeBox", "as_multi_index", "norm_sq"]


def as_multi_index(m: Sequence[int] | np.ndarray) -> np.ndarray:
    """Coerce a multi-index to a 1-d int64 array, rejecting non-integers."""
    arr = np.asarray(m)
    if arr.ndim != 1:
        raise ValueError(f"multi-index must be one-dimensional, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise ValueError(f"multi-index entries must be integers, got {m!r}")
        arr = rounded
    return arr.astype(np.int64)


def norm_sq(m: Sequence[int] | np.ndarray) -> int:
    """Squared Euclidean norm: sum of m_j**2."""
    arr = as_multi_index(m)
    return int(arr @ arr)


@dataclass(frozen=True)
class LatticeBox:
    """The cube Z^d ∩ [-radius, radius]^d with its canonical total order.

    Points are ordered lexicographically, first coordinate slowest: the
    enumeration starts at (-radius, ..., -radius) and ends at
    (radius, ..., radius).  Dimension d >= 1 is accepted here; torus-level
    constructions impose d >= 2 themselves.
    """

    d: int
    radius: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d!r}")
        if not isinstance(self.radius, (int, np.integer)) or self.radius < 0:
            raise ValueError(f"radius must be a nonnegative integer, got {self.radius!r}")

    @property
    def side(self) -> int:
        return 2 * self.radius + 1

    @property
    def cardinality(self) -> int:
        return self.side**self.d

    @cached_property
    def _weights(self) -> np.ndarray:
        # place values of the mixed-radix expansion behind linear_index
        w = self.side ** np.arange(self.d - 1, -1, -1, dtype=np.int64)
        w.flags.writeable = False
        return w

    @cached_property
    def _points(self) -> np.ndarray:
        axes = [np.arange(-self.radius, self.radius + 1, dtype=np.int64)] * self.d
        grid = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(grid, axis=-1).reshape(-1, self.d)
        pts.flags.writeable = False
        return pts

    def enumerate(self) -> np.ndarray:
        """All points as a (cardinality, d) array in canonical order."""
        return self._points

    def contains(self, m: Sequence[int] | np.ndarray) -> bool:
        arr = as_multi_index(m)
        return arr.shape[0] == self.d and bool(np.all(np.abs(arr) <= self.radius))

    def linear_index(self, m: Sequence[int] | np.ndarray) -> int:
        """Position of m in enumerate(); inverse of the enumeration."""
        arr = as_multi_index(m)
        if arr.shape[0] != self.d:
            raise IndexError(
                f"multi-index {tuple(arr)} has dimension {arr.shape[0]}, box has d={self.d}"
            )
        if np.any(np.abs(arr) > self.radius):
            raise IndexError(
                f"multi-index {tuple(arr)} outside box of radius {self.radius}"
            )
        return int((arr + self.radius) @ self._weights)

    def linear_indices(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized linear_index over an (n, d) array of in-box points."""
        pts = np.asarray(pts, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise IndexError(f"expected an (n, {self.d}) array of points, got shape {pts.shape}")
        if np.any(np.abs(pts) > self.radius):
            raise IndexError(f"point outside box of radius {self.radius}")
        return (pts + self.radius) @ self._weights

    def negation_permutation(self) -> np.ndarray:
        """Permutation p with enumerate()[p[i]] == -enumerate()[i].

        Negation reverses the lexicographic order on a symmetric box, so
        this is simply the index reversal.
        """
        return np.arange(self.cardinality - 1, -1, -1)

    def center_index(self) -> int:
        """Linear index of the origin."""
        return (self.cardinality - 1) // 2
