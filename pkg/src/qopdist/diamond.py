"""Diamond distance between two channels by semidefinite programming.

For channels Φ₀, Φ₁ with Choi difference ``J`` (output ⊗ input ordering)
half the diamond norm of Φ₀ - Φ₁ is

    min  ‖Tr_out Z‖_∞   s.t.  Z ⪰ 0,  Z ⪰ J,

whose dual is ``max ⟨J, W⟩`` over ``0 ⪯ W ⪯ I ⊗ ρ``. The ancilla of the
optimal input state has the same dimension as the channel input.

The solver output is not trusted as-is. ``Z`` is shifted by a multiple of
the identity until it is exactly feasible, which gives a certified upper
value. The dual density operator ``ρ`` is purified and polished by a
seesaw ascent, which gives an achievable lower value. Their difference is
the reported primal-dual gap.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from .errors import DomainError, NumericalFailure, SdpConvergenceError, ShapeError
from .linalg import dagger, partial_trace
from .operations import QuantumOperation, choi, validate

GAP_TOL = 1e-7
#: Largest ``output_dim * input_dim`` accepted.
CHOI_DIM_CAP = 64
MAX_ITERS = 200
SEESAW_ROUNDS = 200
# solver settings tried in turn until the certified gap is met
_ATTEMPTS = (
    (cp.CLARABEL, dict(tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)),
    (cp.CLARABEL, {}),
    (cp.SCS, dict(eps_abs=1e-10, eps_rel=1e-10, max_iters=200_000)),
)


@dataclass(frozen=True)
class SdpSolution:
    value: float
    primal_dual_gap: float
    iterations: int
    converged: bool
    lower_value: float = 0.0


def _purification(rho: np.ndarray) -> np.ndarray:
    """``√ρ`` as an ``n x n`` matrix ψ (input index first), normalized."""
    rho = (rho + dagger(rho)) / 2
    w, vecs = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        return np.eye(rho.shape[0]) / np.sqrt(rho.shape[0])
    psi = (vecs * np.sqrt(w)) @ dagger(vecs)
    return psi / np.linalg.norm(psi)


def _seesaw(u_ch: QuantumOperation, v_ch: QuantumOperation, psi: np.ndarray,
            max_rounds: int = SEESAW_ROUNDS) -> float:
    """Achievable value ½‖(𝒰⊗I − 𝒱⊗I)(ψψ†)‖₁ polished by alternating maximization.

    With the input fixed, the best measurement is the projector ``P`` onto
    the positive part of the output difference; with ``P`` fixed, the best
    input is the top eigenvector of the adjoint map applied to ``P``. Each
    round can only increase the value.
    """
    n = psi.shape[0]
    eye = np.eye(n)
    big_u = [np.kron(a, eye) for a in u_ch.kraus]
    big_v = [np.kron(b, eye) for b in v_ch.kraus]
    vec = psi.reshape(-1)
    best = 0.0
    for _ in range(max_rounds):
        diff = sum(np.outer(a @ vec, (a @ vec).conj()) for a in big_u)
        diff = diff - sum(np.outer(b @ vec, (b @ vec).conj()) for b in big_v)
        w, basis = np.linalg.eigh((diff + dagger(diff)) / 2)
        value = 0.5 * float(np.abs(w).sum())
        if value <= best + 1e-15:
            best = max(best, value)
            break
        best = value
        pos = basis[:, w > 0]
        proj = pos @ dagger(pos)
        h = sum(dagger(a) @ proj @ a for a in big_u) - sum(dagger(b) @ proj @ b for b in big_v)
        vec = np.linalg.eigh((h + dagger(h)) / 2)[1][:, -1]
    return min(best, 1.0)


def diamond_distance(u_ch: QuantumOperation, v_ch: QuantumOperation,
                     gap_tol: float = GAP_TOL, max_iters: int = MAX_ITERS,
                     dim_cap: int = CHOI_DIM_CAP, check_converged: bool = True) -> SdpSolution:
    """Half the diamond norm of ``u_ch - v_ch``.

    Args:
        u_ch, v_ch: trace-preserving operations with identical dimensions.
        gap_tol: required certified gap between the upper and lower values.
        max_iters: interior-point iteration cap.
        dim_cap: largest accepted Choi dimension.
        check_converged: raise if the gap is not met (otherwise return the
            solution with ``converged=False``).

    Returns:
        An :class:`SdpSolution` whose ``value`` is the certified upper value,
        clipped to ``[0, 1]``.

    Raises:
        DomainError: an input is not trace-preserving.
        SdpConvergenceError: the certified gap exceeds ``gap_tol``.
    """
    for name, ch in (("first", u_ch), ("second", v_ch)):
        if not validate(ch).trace_preserving:
            raise DomainError(f"{name} channel is not trace-preserving")
    if (u_ch.output_dim, u_ch.input_dim) != (v_ch.output_dim, v_ch.input_dim):
        raise ShapeError("channels have different input/output dimensions")
    m, n = u_ch.output_dim, u_ch.input_dim
    d = m * n
    if d > dim_cap:
        raise ShapeError(f"Choi dimension {d} exceeds cap {dim_cap}")

    j = choi(u_ch) - choi(v_ch)
    j = (j + dagger(j)) / 2

    upper, lower, iters, status = np.inf, 0.0, 0, "not solved"
    for solver, settings in _ATTEMPTS:
        try:
            up, rho, it, status = _solve(j, m, n, solver, max_iters, settings)
        except NumericalFailure:
            continue
        iters += it
        upper = min(upper, up)
        for start in (rho, rho.T):
            lower = max(lower, _seesaw(u_ch, v_ch, _purification(start)))
        if upper - lower < gap_tol:
            break
    if not np.isfinite(upper):
        raise SdpConvergenceError(f"SDP solver failed (last status {status})", np.inf, iters)
    gap = max(0.0, upper - lower)
    converged = gap < gap_tol
    if check_converged and not converged:
        raise SdpConvergenceError(
            f"SDP gap {gap:.3e} exceeds tolerance {gap_tol:.1e} after {iters} iterations "
            f"(last status {status})", gap, iters)
    return SdpSolution(value=min(1.0, max(0.0, upper)), primal_dual_gap=gap,
                       iterations=iters, converged=converged, lower_value=lower)


def _solve(j: np.ndarray, m: int, n: int, solver: str, max_iters: int, settings: dict):
    """One solve; returns (certified upper value, dual ρ, iterations, status)."""
    d = m * n
    z = cp.Variable((d, d), hermitian=True)
    t = cp.Variable()
    ptrace = cp.partial_trace(z, [m, n], axis=0)
    # cvxpy wants the expression in the PSD constraint to be visibly Hermitian
    ptrace = (ptrace + ptrace.H) / 2
    marg = t * np.eye(n) - ptrace >> 0
    prob = cp.Problem(cp.Minimize(t), [z >> 0, z - j >> 0, marg])
    try:
        with warnings.catch_warnings():
            # accuracy is certified below, so "inaccurate" solutions are still usable
            warnings.simplefilter("ignore", UserWarning)
            if solver == cp.CLARABEL:
                settings = dict(settings, max_iter=max_iters)
            prob.solve(solver=solver, **settings)
    except cp.SolverError as exc:
        raise NumericalFailure(f"SDP solver failed: {exc}") from exc
    if z.value is None or marg.dual_value is None:
        raise NumericalFailure(f"SDP solver returned status {prob.status}")
    zv = (z.value + dagger(z.value)) / 2
    shift = max(0.0, -np.linalg.eigvalsh(zv - j)[0], -np.linalg.eigvalsh(zv)[0])
    upper = float(np.linalg.eigvalsh(partial_trace(zv + shift * np.eye(d), m, n, "first"))[-1])
    iters = int(prob.solver_stats.num_iters or 0)
    return upper, np.asarray(marg.dual_value), iters, prob.status
