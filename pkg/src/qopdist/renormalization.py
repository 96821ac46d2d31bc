"""Upper bound on the general distance by renormalization.

With Stinespring operators ``A`` (from ``e``) and ``B`` (from ``f``) the
product ``B A⁺`` is factored as ``U M V^†``. ``U`` and ``V`` define two
channels whose diamond distance, plus the closed-form distance between the
identity and the normalizing map ``ρ ↦ MρM / Tr[MρM]``, bounds the
distance between the normalized outputs of ``e`` and ``f``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diamond import GAP_TOL, MAX_ITERS, diamond_distance
from .errors import DomainError, NumericalFailure, RankDeficiencyError, ShapeError
from .linalg import dagger, default_rank_tol, pseudoinverse, svd
from .operations import QuantumOperation, from_stinespring, require_valid, stinespring

#: sigma_min / sigma_max of A below which a rank warning is recorded.
ILL_CONDITIONED = 1e-8


@dataclass(frozen=True, eq=False)
class RenormalizationDecomposition:
    u: np.ndarray       # (k'·m) x n isometry
    v: np.ndarray       # (k·m) x n isometry
    m_diag: np.ndarray  # singular values of B A⁺, non-increasing
    n: int
    m: int
    k: int
    k_prime: int
    condition: float = 1.0
    rank_warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundOptions:
    rank_tol: float | None = None
    gap_tol: float = GAP_TOL
    max_iters: int = MAX_ITERS


@dataclass(frozen=True)
class Diagnostics:
    sdp_iterations: int
    sdp_gap: float
    rank_warnings: tuple[str, ...] = ()
    normalizing_eigenvalues: tuple[float, ...] = ()
    condition: float = 1.0


@dataclass(frozen=True)
class DistanceBound:
    diamond_part: float
    normalizing_part: float
    total: float
    diagnostics: Diagnostics = field(default_factory=lambda: Diagnostics(0, 0.0))

    def to_dict(self) -> dict:
        d = self.diagnostics
        return {
            "diamond_part": self.diamond_part,
            "normalizing_part": self.normalizing_part,
            "total": self.total,
            "diagnostics": {
                "sdp_iterations": d.sdp_iterations,
                "sdp_gap": d.sdp_gap,
                "rank_warnings": list(d.rank_warnings),
                "normalizing_eigenvalues": list(d.normalizing_eigenvalues),
                "condition": d.condition,
            },
        }


def _check_pair(e: QuantumOperation, f: QuantumOperation) -> None:
    if (e.input_dim, e.output_dim) != (f.input_dim, f.output_dim):
        raise ShapeError(
            f"operations differ in shape: {e.output_dim}x{e.input_dim} vs "
            f"{f.output_dim}x{f.input_dim}")
    require_valid(e, "first operation")
    require_valid(f, "second operation")


def decompose(e: QuantumOperation, f: QuantumOperation,
              rank_tol: float | None = None) -> RenormalizationDecomposition:
    """Factor ``B A⁺ = U diag(m_diag) V^†`` with ``U``, ``V`` full isometries.

    ``V`` spans exactly the range of ``A`` (so every normalized ``A v`` is
    ``V φ`` for a unit ``φ``). If ``f`` has too few Kraus operators for a
    ``(k'·m) x n`` isometry to exist, zero Kraus operators are appended,
    which leaves the map unchanged.

    Raises:
        RankDeficiencyError: ``A`` does not have full column rank.
    """
    _check_pair(e, f)
    n, m = e.input_dim, e.output_dim
    a = stinespring(e).a
    kraus_f = list(f.kraus)
    while len(kraus_f) * m < n:
        kraus_f.append(np.zeros((m, n)))
    b = np.vstack(kraus_f)

    ua, sa, _ = svd(a)
    s_max = float(sa[0])
    if rank_tol is None:
        rank_tol = default_rank_tol(a, s_max)
    null_dim = int(np.count_nonzero(sa <= rank_tol))
    if null_dim:
        raise RankDeficiencyError(null_dim, float(sa[-1]), rank_tol)
    condition = float(sa[-1] / s_max)
    warnings = ()
    if condition < ILL_CONDITIONED:
        warnings = (f"Stinespring operator is ill-conditioned: "
                    f"sigma_min/sigma_max = {condition:.3e}",)

    # ua is an orthonormal basis of range(A); A⁺ = A⁺ ua ua^†
    c = b @ pseudoinverse(a, rank_tol) @ ua
    try:
        u_full, s, wh = np.linalg.svd(c, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge for {c.shape[0]}x{c.shape[1]} matrix") from exc
    u = u_full[:, :n]
    v = ua @ dagger(wh)
    return RenormalizationDecomposition(
        u=u, v=v, m_diag=s, n=n, m=m, k=e.num_kraus, k_prime=len(kraus_f),
        condition=condition, rank_warnings=warnings)


def renormalized_channels(d: RenormalizationDecomposition) -> tuple[QuantumOperation, QuantumOperation]:
    """The channels ``ρ ↦ Tr_Z(UρU^†)`` and ``ρ ↦ Tr_Z(VρV^†)``."""
    return from_stinespring(d.u, d.m), from_stinespring(d.v, d.m)


def normalizing_distance(m_diag) -> float:
    """``(λ_max - λ_min) / (λ_max + λ_min)`` for the normalizing map with eigenvalues ``m_diag``."""
    lam = np.asarray(m_diag, dtype=float)
    if lam.size == 0 or np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise DomainError("normalizing eigenvalues must be finite and non-negative")
    hi, lo = float(lam.max()), float(lam.min())
    if hi == 0:
        raise DomainError("normalizing operator is zero")
    return (hi - lo) / (hi + lo)


def bound(e: QuantumOperation, f: QuantumOperation,
          opts: BoundOptions = BoundOptions()) -> DistanceBound:
    """Upper bound on the general distance between ``e`` and ``f``.

    The Stinespring operator of ``e`` is the one inverted, so the result is
    not symmetric in its arguments; see :func:`bound_both_orders`.
    """
    d = decompose(e, f, opts.rank_tol)
    norm_part = normalizing_distance(d.m_diag)
    u_ch, v_ch = renormalized_channels(d)
    sol = diamond_distance(u_ch, v_ch, gap_tol=opts.gap_tol, max_iters=opts.max_iters)
    total = min(1.0, sol.value + norm_part)
    return DistanceBound(
        diamond_part=sol.value,
        normalizing_part=norm_part,
        total=total,
        diagnostics=Diagnostics(
            sdp_iterations=sol.iterations,
            sdp_gap=sol.primal_dual_gap,
            rank_warnings=d.rank_warnings,
            normalizing_eigenvalues=tuple(float(x) for x in d.m_diag),
            condition=d.condition,
        ),
    )


def bound_both_orders(e: QuantumOperation, f: QuantumOperation,
                      opts: BoundOptions = BoundOptions()) -> tuple[DistanceBound, DistanceBound, float]:
    """Bounds for ``(e, f)`` and ``(f, e)`` and the smaller total."""
    fwd = bound(e, f, opts)
    rev = bound(f, e, opts)
    return fwd, rev, min(fwd.total, rev.total)
