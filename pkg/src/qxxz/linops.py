"""Dense complex linear algebra helpers shared by all operator modules.

Matrices are plain numpy arrays (complex128, row-major).  The chain lives on
(C^2)^(tensor N) with the basis convention that site 1 is the most significant
bit and bit 0 means spin up (+1/2), so the all-up state is index 0 and the
S^z weight of basis index a is (N - 2*popcount(a))/2.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_MAX_DIM = 4096
DEFAULT_RANK_TOL = 1e-10


class NotHermitianError(ValueError):
    """Input matrix fails the Hermitian precondition."""


class PositivityError(ArithmeticError):
    """Matrix is not positive definite; carries the offending eigenvalue."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class SectorMixingError(ValueError):
    """Operator does not commute with S^z to the requested tolerance."""


def max_dim() -> int:
    """Dense-size cap on the full-space dimension; QXXZ_MAX_DIM overrides."""
    env = os.environ.get("QXXZ_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


def check_dim(dim: int):
    cap = max_dim()
    if dim > cap:
        raise ValueError(f"dense dimension {dim} exceeds cap {cap} (set QXXZ_MAX_DIM to raise)")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the dense-size guard."""
    entries = a.shape[0] * b.shape[0] * a.shape[1] * b.shape[1]
    if entries > max_dim() ** 2:
        raise ValueError(f"kron result with {entries} entries exceeds the dense cap")
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def hermitian_eig(a: np.ndarray, tol: float = DEFAULT_RANK_TOL):
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Rejects input with ||a - a^H|| > tol * ||a||.  Returns (w, v) with v
    unitary and a v = v diag(w) to a residual of order tol.
    """
    scale = frob(a)
    if frob(a - dagger(a)) > tol * max(scale, 1.0):
        raise NotHermitianError(f"matrix is not Hermitian to tolerance {tol}")
    w, v = np.linalg.eigh(a)
    return w, v


def positive_sqrt(a: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Unique positive square root of a Hermitian positive definite matrix."""
    w, v = hermitian_eig(a, tol)
    wmin = float(w[0])
    if wmin <= tol:
        raise PositivityError(
            f"matrix is not positive definite: smallest eigenvalue {wmin:.3e}", wmin
        )
    return (v * np.sqrt(w)) @ dagger(v)


def numeric_rank(a: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above tol times the largest one."""
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def weight_table(N: int) -> np.ndarray:
    """Twice the S^z weight of every basis index: N - 2*popcount."""
    idx = np.arange(2**N, dtype=np.int64)
    pop = np.zeros(2**N, dtype=np.int64)
    for bit in range(N):
        pop += (idx >> bit) & 1
    return N - 2 * pop


@dataclass(frozen=True)
class SectorMap:
    """Basis positions of one S^z sector (m stored exactly as a Fraction)."""

    N: int
    m: Fraction
    indices: np.ndarray

    def __post_init__(self):
        # cardinality must be C(N, N/2 - m); k is computed exactly
        k = Fraction(self.N, 2) - self.m
        if k.denominator != 1 or not 0 <= k <= self.N:
            raise ValueError(f"m = {self.m} is not a weight of the N = {self.N} chain")
        if len(self.indices) != math.comb(self.N, int(k)):
            raise ValueError("sector index list has the wrong cardinality")


def sector_map(N: int, m) -> SectorMap:
    m = Fraction(m) if not isinstance(m, Fraction) else m
    tw = weight_table(N)
    indices = np.flatnonzero(tw == int(2 * m))
    return SectorMap(N=N, m=m, indices=indices)


def all_sectors(N: int) -> list[SectorMap]:
    return [sector_map(N, Fraction(t, 2)) for t in range(N, -N - 1, -2)]


def sector_restrict(a: np.ndarray, sector: SectorMap, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Sub-matrix of a on one S^z sector; rejects sector-mixing operators."""
    tw = weight_table(sector.N)
    scale = max(frob(a), 1.0)
    mixing = 0.0
    for t in np.unique(tw):
        rows = np.flatnonzero(tw == t)
        block = a[np.ix_(rows, np.flatnonzero(tw != t))]
        mixing += float(np.linalg.norm(block)) ** 2
    if math.sqrt(mixing) > tol * scale:
        raise SectorMixingError(
            f"operator mixes S^z sectors (off-block norm {math.sqrt(mixing):.3e})"
        )
    return a[np.ix_(sector.indices, sector.indices)]
