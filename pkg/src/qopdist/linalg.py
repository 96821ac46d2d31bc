"""Dense complex linear algebra.

Matrices are plain 2-D ``complex128`` numpy arrays. The factorizations
delegate to LAPACK through numpy; this module fixes the result contracts
(ordering, full-size SVD, tolerances, error types) the rest of the package
relies on.
"""
from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from .errors import DomainError, NumericalFailure, ShapeError, SizeError

#: Largest row/column count :func:`kron` will produce.
KRON_DIM_CAP = 4096

EPS = np.finfo(np.float64).eps


class SvdResult(NamedTuple):
    u: np.ndarray  # m x r, orthonormal columns
    s: np.ndarray  # length r, non-increasing
    v: np.ndarray  # n x r, orthonormal columns


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def svd(m) -> SvdResult:
    """Singular value decomposition with ``r = min(rows, cols)``.

    Zero singular values are kept, so ``u`` and ``v`` always have ``r``
    orthonormal columns and ``u @ diag(s) @ v^†`` reconstructs ``m``.

    Raises:
        NumericalFailure: LAPACK did not converge.
    """
    m = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge for {m.shape[0]}x{m.shape[1]} matrix") from exc
    return SvdResult(u, s, dagger(vh))


def default_rank_tol(m: np.ndarray, s_max: float) -> float:
    """Numerical-rank cutoff ``max(rows, cols) * eps * sigma_max``."""
    return max(m.shape) * EPS * s_max


def pseudoinverse(m, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse ``V Σ⁺ U†``.

    Singular values ``<= rank_tol`` are treated as zero. The default cutoff
    is :func:`default_rank_tol`.
    """
    m = as_matrix(m)
    u, s, v = svd(m)
    s_max = float(s[0]) if s.size else 0.0
    if rank_tol is None:
        rank_tol = default_rank_tol(m, s_max)
    elif rank_tol <= 0:
        raise DomainError("rank_tol must be positive")
    keep = s > rank_tol
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (v * inv) @ dagger(u)


def trace_norm(m) -> float:
    """Sum of singular values."""
    return float(svd(m).s.sum())


def partial_trace(m, dim_a: int, dim_b: int,
                  traced: Literal["first", "second"] = "first") -> np.ndarray:
    """Partial trace of an operator on ``A ⊗ B``.

    ``traced="first"`` returns ``Tr_A m`` (a ``dim_b`` square matrix),
    ``traced="second"`` returns ``Tr_B m``.
    """
    m = as_matrix(m)
    d = dim_a * dim_b
    if m.shape != (d, d):
        raise ShapeError(f"expected a {d}x{d} matrix for dims ({dim_a}, {dim_b}), got {m.shape}")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if traced == "first":
        return np.einsum("ajak->jk", t)
    if traced == "second":
        return np.einsum("iaja->ij", t)
    raise ValueError(f"traced must be 'first' or 'second', not {traced!r}")


def kron(a, b, cap: int = KRON_DIM_CAP) -> np.ndarray:
    """Kronecker product, refusing outputs larger than ``cap`` per side."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if rows > cap or cols > cap:
        raise SizeError(f"kron output {rows}x{cols} exceeds cap {cap}")
    return np.kron(a, b)


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.linalg.norm(m - dagger(m)) < tol * max(1.0, np.linalg.norm(m)))


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues non-increasing.

    Raises:
        DomainError: ``m`` is not Hermitian to relative tolerance 1e-10.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    if not is_hermitian(m):
        raise DomainError("matrix is not Hermitian")
    try:
        w, v = np.linalg.eigh((m + dagger(m)) / 2)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigh did not converge for {m.shape[0]}x{m.shape[0]} matrix") from exc
    return w[::-1].copy(), v[:, ::-1].copy()
