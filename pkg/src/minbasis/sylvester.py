"""Sylvester matrices and tolerance-based numerical rank decisions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .polymat import PolyMat

__all__ = [
    "SylvesterMatrix",
    "RankDecision",
    "sylvester",
    "rank_nullity",
    "min_singular_value",
    "default_tolerance",
    "singular_values",
]


@dataclass(frozen=True, eq=False)
class SylvesterMatrix:
    """The banded block-Toeplitz stack with k block columns.

    Block (i, j) equals C_{i-j} for 0 <= i-j <= d and is zero otherwise, so
    the matrix has (k + d) * m rows and k * q columns.
    """

    k: int
    m: int
    q: int
    d: int
    data: np.ndarray

    @property
    def rows(self) -> int:
        return (self.k + self.d) * self.m

    @property
    def cols(self) -> int:
        return self.k * self.q


def sylvester(P: PolyMat, k: int) -> SylvesterMatrix:
    """Build the k-th Sylvester matrix of P using its ambient grade."""
    if not isinstance(k, int) or k < 1:
        raise ShapeError(f"block-column count k must be a positive integer, got {k!r}")
    m, q, d = P.rows, P.cols, P.degree_bound
    data = np.zeros(((k + d) * m, k * q), dtype=P.coeffs.dtype)
    for j in range(k):
        for i in range(d + 1):
            data[(j + i) * m : (j + i + 1) * m, j * q : (j + 1) * q] = P.coeffs[i]
    data.flags.writeable = False
    return SylvesterMatrix(k=k, m=m, q=q, d=d, data=data)


def _as_array(A) -> np.ndarray:
    arr = A.data if isinstance(A, SylvesterMatrix) else np.asarray(A)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    return arr


def default_tolerance(shape: tuple[int, int], sigma1: float) -> float:
    """Standard numerical-rank threshold max(p, q) * eps * sigma1."""
    return max(shape) * float(np.finfo(np.float64).eps) * sigma1


def singular_values(A) -> np.ndarray:
    """Descending singular values of a matrix or Sylvester matrix."""
    return np.linalg.svd(_as_array(A), compute_uv=False)


@dataclass(frozen=True)
class RankDecision:
    """Numerical rank verdict with the full spectrum kept for diagnostics."""

    rank: int
    nullity: int
    singular_values: tuple[float, ...]
    tolerance_used: float

    @property
    def gap_ratio(self) -> float:
        """Ratio sigma_rank / sigma_{rank+1}; inf when one side is absent."""
        sv = self.singular_values
        if self.rank == 0 or self.rank >= len(sv) or sv[self.rank] == 0.0:
            return float("inf")
        return sv[self.rank - 1] / sv[self.rank]


def rank_nullity(A, tol: float | None = None) -> RankDecision:
    """Numerical rank and right nullity of a constant matrix.

    The rank counts singular values above ``tol``; when ``tol`` is None the
    threshold is max(rows, cols) * eps * sigma_1.
    """
    arr = _as_array(A)
    sv = np.linalg.svd(arr, compute_uv=False)
    tau = float(tol) if tol is not None else default_tolerance(arr.shape, float(sv[0]))
    rank = int(np.count_nonzero(sv > tau))
    return RankDecision(
        rank=rank,
        nullity=arr.shape[1] - rank,
        singular_values=tuple(float(s) for s in sv),
        tolerance_used=tau,
    )


def min_singular_value(A, which: int = 0) -> float:
    """Singular value counted from the smallest; ``which=0`` is the smallest."""
    sv = singular_values(A)
    if not 0 <= which < len(sv):
        raise IndexError(f"singular value index {which} out of range for {len(sv)} values")
    return float(sv[len(sv) - 1 - which])
