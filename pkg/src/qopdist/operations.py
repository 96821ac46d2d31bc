"""Sub-normalized quantum operations in Kraus form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AnnihilatedStateError, DomainError, ShapeError, ValidationError
from .linalg import KRON_DIM_CAP, as_matrix, dagger, is_hermitian, kron, partial_trace

#: Outputs with trace at or below this are treated as annihilated.
TRACE_FLOOR = 1e-12
#: Slack on the largest eigenvalue of sum(a^† a) before an operation counts as trace-increasing.
NONINCREASING_TOL = 1e-9
TRACE_PRESERVING_TOL = 1e-9
PSD_FLOOR = -1e-9


@dataclass(frozen=True, eq=False, init=False, repr=False)
class QuantumOperation:
    """A completely positive map ``ρ ↦ Σ a_i ρ a_i^†``.

    Kraus operators are stored as given (read-only ``m x n`` arrays, ``n``
    the input dimension). The trace-nonincreasing condition is *not*
    enforced here so that :func:`validate` can report on arbitrary sets;
    the distance routines check it on entry.
    """

    kraus: tuple[np.ndarray, ...]

    def __init__(self, kraus: Sequence):
        mats = []
        for i, k in enumerate(kraus):
            a = as_matrix(k, f"kraus[{i}]").copy()
            a.flags.writeable = False
            mats.append(a)
        if not mats:
            raise ShapeError("an operation needs at least one Kraus operator")
        shape = mats[0].shape
        for i, a in enumerate(mats):
            if a.shape != shape:
                raise ShapeError(f"kraus[{i}] has shape {a.shape}, expected {shape}")
        object.__setattr__(self, "kraus", tuple(mats))

    @property
    def input_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def num_kraus(self) -> int:
        return len(self.kraus)

    def effect(self) -> np.ndarray:
        """``Σ a_i^† a_i``."""
        return sum(dagger(a) @ a for a in self.kraus)

    def scaled(self, c: float) -> "QuantumOperation":
        return QuantumOperation([c * a for a in self.kraus])

    def __repr__(self) -> str:
        return (f"QuantumOperation(n={self.input_dim}, m={self.output_dim}, "
                f"k={self.num_kraus})")


@dataclass(frozen=True)
class ValidationReport:
    max_eigenvalue: float
    trace_nonincreasing: bool
    trace_preserving: bool
    input_dim: int
    output_dim: int
    num_kraus: int

    def to_dict(self) -> dict:
        return {
            "max_eigenvalue": self.max_eigenvalue,
            "trace_nonincreasing": self.trace_nonincreasing,
            "trace_preserving": self.trace_preserving,
            "input_dim": self.input_dim,
            "output_dim": self.output_dim,
            "num_kraus": self.num_kraus,
        }


@dataclass(frozen=True, eq=False)
class StinespringOperator:
    """Vertically stacked Kraus operators ``A = Σ e_i ⊗ a_i`` of shape ``(k·m) x n``."""

    a: np.ndarray
    k: int
    m: int
    n: int

    def blocks(self) -> list[np.ndarray]:
        return [self.a[i * self.m:(i + 1) * self.m] for i in range(self.k)]


def validate(op: QuantumOperation) -> ValidationReport:
    eff = op.effect()
    lam = float(np.linalg.eigvalsh((eff + dagger(eff)) / 2)[-1])
    tp = float(np.linalg.norm(eff - np.eye(op.input_dim))) < TRACE_PRESERVING_TOL
    return ValidationReport(
        max_eigenvalue=lam,
        trace_nonincreasing=lam <= 1 + NONINCREASING_TOL,
        trace_preserving=tp,
        input_dim=op.input_dim,
        output_dim=op.output_dim,
        num_kraus=op.num_kraus,
    )


def require_valid(op: QuantumOperation, name: str = "operation") -> ValidationReport:
    """Return the validation report, raising if ``op`` increases trace."""
    report = validate(op)
    if not report.trace_nonincreasing:
        raise ValidationError(
            f"{name} is not trace-nonincreasing: "
            f"largest eigenvalue of sum(a^† a) is {report.max_eigenvalue:.12g}")
    return report


def _check_state(op: QuantumOperation, rho) -> np.ndarray:
    rho = as_matrix(rho, "rho")
    n = op.input_dim
    if rho.shape != (n, n):
        raise ShapeError(f"state has shape {rho.shape}, operation expects {n}x{n}")
    if not is_hermitian(rho, 1e-9):
        raise DomainError("state is not Hermitian")
    if np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0] < PSD_FLOOR:
        raise DomainError("state is not positive semidefinite")
    return rho


def apply(op: QuantumOperation, rho) -> np.ndarray:
    """Unnormalized output ``Σ a_i ρ a_i^†``."""
    rho = _check_state(op, rho)
    return sum(a @ rho @ dagger(a) for a in op.kraus)


def apply_normalized(op: QuantumOperation, rho, trace_floor: float = TRACE_FLOOR) -> np.ndarray:
    """Output state conditioned on the operation succeeding.

    Raises:
        AnnihilatedStateError: the output trace is ``<= trace_floor``.
    """
    out = apply(op, rho)
    tr = float(np.trace(out).real)
    if tr <= trace_floor:
        raise AnnihilatedStateError(tr, trace_floor)
    return out / tr


def stinespring(op: QuantumOperation) -> StinespringOperator:
    return StinespringOperator(np.vstack(op.kraus), op.num_kraus, op.output_dim, op.input_dim)


def from_stinespring(a: np.ndarray, m: int) -> QuantumOperation:
    """Slice a ``(k·m) x n`` stacked operator back into ``k`` Kraus blocks."""
    a = as_matrix(a)
    if a.shape[0] % m:
        raise ShapeError(f"{a.shape[0]} rows are not a multiple of output dim {m}")
    return QuantumOperation([a[i * m:(i + 1) * m] for i in range(a.shape[0] // m)])


def apply_stinespring(s: StinespringOperator, rho) -> np.ndarray:
    """``Tr_Z (A ρ A^†)`` with the reference space ``Z`` of dimension ``k``."""
    rho = as_matrix(rho, "rho")
    return partial_trace(s.a @ rho @ dagger(s.a), s.k, s.m, traced="first")


def extend_with_identity(op: QuantumOperation, dim_r: int, cap: int = KRON_DIM_CAP) -> QuantumOperation:
    """The operation ``E ⊗ I_R`` with Kraus set ``{a_i ⊗ I_R}``."""
    if dim_r < 1:
        raise DomainError("dim_r must be >= 1")
    if dim_r == 1:
        return op
    eye = np.eye(dim_r)
    return QuantumOperation([kron(a, eye, cap) for a in op.kraus])


def choi(op: QuantumOperation) -> np.ndarray:
    """Choi matrix ``Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`` (output factor first)."""
    vecs = np.stack([a.reshape(-1) for a in op.kraus], axis=1)
    return vecs @ dagger(vecs)
