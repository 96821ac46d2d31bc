"""Monte Carlo estimation over Haar-random pure states.

Sampling is split into fixed-size chunks. Chunk ``c`` draws from its own
PCG64 stream seeded with ``SeedSequence(seed, spawn_key=(c,))``, so the
samples (and every statistic built from them) depend only on the seed and
the sample count, never on how many workers ran the chunks.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSamplingError, DomainError, ShapeError
from .operations import TRACE_FLOOR, QuantumOperation, require_valid

CHUNK_SIZE = 4096
DEFAULT_SAMPLES = 100_000
THREADS_ENV = "QOPDIST_THREADS"


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def haar_states(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random unit vectors of dimension ``dim`` (one per row)."""
    if dim < 1:
        raise DomainError("dim must be >= 1")
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    return haar_states(1, dim, rng)[0]


def pure_trace_distance(psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """½‖ψψ† − φφ†‖₁ = √(1 − |⟨ψ|φ⟩|²) for (batches of) possibly unnormalized vectors.

    Uses the Lagrange identity ``‖ψ‖²‖φ‖² − |⟨ψ|φ⟩|² = ½ Σ_ij |ψ_i φ_j − ψ_j φ_i|²``
    so that parallel vectors give rounding-level values rather than √eps.
    """
    psi = np.atleast_2d(psi)
    phi = np.atleast_2d(phi)
    outer = psi[:, :, None] * phi[:, None, :]
    wedge = 0.5 * np.sum(np.abs(outer - outer.transpose(0, 2, 1)) ** 2, axis=(1, 2))
    norms = np.sum(np.abs(psi) ** 2, axis=1) * np.sum(np.abs(phi) ** 2, axis=1)
    return np.sqrt(np.clip(wedge / norms, 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class McReport:
    max_distance: float
    mean: float
    median: float
    samples: np.ndarray   # trace distance of each accepted sample
    indices: np.ndarray   # global sample index of each accepted sample
    seed: int
    rejected: int
    ancilla_dim: int
    n_samples: int

    def summary(self) -> dict:
        return {
            "max_distance": self.max_distance,
            "mean": self.mean,
            "median": self.median,
            "n_samples": self.n_samples,
            "accepted": int(self.samples.size),
            "rejected": self.rejected,
            "seed": self.seed,
            "ancilla_dim": self.ancilla_dim,
        }


def _outputs(op: QuantumOperation, psi: np.ndarray) -> np.ndarray:
    """Output vectors ``(a_i ⊗ I) ψ``, shape (batch, k, m·r); ``psi`` is (batch, n, r)."""
    stacked = np.stack(op.kraus)  # k, m, n
    out = np.einsum("kmn,bnr->bkmr", stacked, psi)
    return out.reshape(psi.shape[0], op.num_kraus, -1)


def _chunk_distances(e, f, seed, chunk, count, ancilla_dim):
    n = e.input_dim
    rng = chunk_rng(seed, chunk)
    psi = haar_states(count, n * ancilla_dim, rng).reshape(count, n, ancilla_dim)
    ve = _outputs(e, psi)
    vf = _outputs(f, psi)
    tr_e = np.sum(np.abs(ve) ** 2, axis=(1, 2))
    tr_f = np.sum(np.abs(vf) ** 2, axis=(1, 2))
    keep = (tr_e > TRACE_FLOOR) & (tr_f > TRACE_FLOOR)
    ve, vf, tr_e, tr_f = ve[keep], vf[keep], tr_e[keep], tr_f[keep]
    if e.num_kraus == 1 and f.num_kraus == 1:
        dist = pure_trace_distance(ve[:, 0], vf[:, 0])
    else:
        rho_e = np.einsum("bki,bkj->bij", ve, ve.conj()) / tr_e[:, None, None]
        rho_f = np.einsum("bki,bkj->bij", vf, vf.conj()) / tr_f[:, None, None]
        dist = 0.5 * np.abs(np.linalg.eigvalsh(rho_e - rho_f)).sum(axis=1)
        dist = np.clip(dist, 0.0, 1.0)
    idx = chunk * CHUNK_SIZE + np.flatnonzero(keep)
    return dist, idx


def mc_lower_bound(e: QuantumOperation, f: QuantumOperation,
                   n_samples: int = DEFAULT_SAMPLES, ancilla_dim: int | None = None,
                   seed: int = 0, workers: int | None = None) -> McReport:
    """Monte Carlo lower bound on the general distance.

    Each sample is a Haar-random pure state on the input space extended by
    an ancilla of dimension ``ancilla_dim`` (default: the input dimension).
    The maximum over samples never exceeds the true distance.

    Raises:
        DegenerateSamplingError: every sample was annihilated.
    """
    if (e.input_dim, e.output_dim) != (f.input_dim, f.output_dim):
        raise ShapeError("operations differ in shape")
    require_valid(e, "first operation")
    require_valid(f, "second operation")
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    r = e.input_dim if ancilla_dim is None else int(ancilla_dim)
    if r < 1:
        raise DomainError("ancilla_dim must be >= 1")
    workers = default_workers() if workers is None else max(1, int(workers))

    n_chunks = -(-n_samples // CHUNK_SIZE)
    counts = [min(CHUNK_SIZE, n_samples - c * CHUNK_SIZE) for c in range(n_chunks)]
    jobs = [(e, f, seed, c, counts[c], r) for c in range(n_chunks)]
    if workers == 1 or n_chunks == 1:
        parts = [_chunk_distances(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk_distances(*job), jobs))

    dist = np.concatenate([p[0] for p in parts])
    idx = np.concatenate([p[1] for p in parts])
    if dist.size == 0:
        raise DegenerateSamplingError(f"all {n_samples} samples were annihilated")
    return McReport(
        max_distance=float(dist.max()),
        mean=float(dist.mean()),
        median=float(np.median(dist)),
        samples=dist,
        indices=idx,
        seed=seed,
        rejected=n_samples - int(dist.size),
        ancilla_dim=r,
        n_samples=n_samples,
    )


# Feasible domain of the normalizing map ----------------------------------------------

@dataclass(frozen=True)
class FeasiblePoint:
    r: float
    cos_theta: float


def _eigenvalues(lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float).ravel()
    if lam.size == 0 or np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise DomainError("eigenvalues must be finite and non-negative")
    if lam.max() == 0:
        raise DomainError("all eigenvalues are zero")
    return lam


def min_cos_theta(lambdas) -> float:
    """Smallest cosine of the rotation angle between ψ and Mψ/|Mψ|: ``2√(λ_max λ_min)/(λ_max+λ_min)``."""
    lam = _eigenvalues(lambdas)
    hi, lo = float(lam.max()), float(lam.min())
    return 2.0 * np.sqrt(hi * lo) / (hi + lo)


def contraction_and_rotation(lambdas, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``r = |Mψ|`` and ``cos θ = ⟨ψ|M|ψ⟩ / r`` for ``M = diag(lambdas)`` and each row ψ."""
    lam = _eigenvalues(lambdas)
    states = np.atleast_2d(states)
    if states.shape[1] != lam.size:
        raise ShapeError(f"states have dimension {states.shape[1]}, expected {lam.size}")
    p = np.abs(states) ** 2
    p = p / p.sum(axis=1, keepdims=True)
    r = np.sqrt(p @ lam**2)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos = (p @ lam) / r
    return r, cos


def feasible_polygon(lambdas) -> np.ndarray:
    """Vertices ``(λ², λ)`` of the feasible set in ``(r², r cos θ)`` coordinates.

    The points lie on the convex curve ``x = y²`` so each distinct eigenvalue
    is a vertex; they are returned in increasing ``λ`` (a convex polygon
    traversed along the curve, closed by the chord between the extremes).
    """
    lam = np.unique(_eigenvalues(lambdas))
    return np.column_stack([lam**2, lam])


def _chord(a: float, b: float, n_points: int, extra=()) -> list[FeasiblePoint]:
    x = np.unique(np.concatenate([np.linspace(0.0, 1.0, n_points), np.asarray(extra, dtype=float)]))
    r2 = x * a**2 + (1 - x) * b**2
    rc = x * a + (1 - x) * b
    keep = r2 > 0
    r = np.sqrt(r2[keep])
    return [FeasiblePoint(float(ri), float(ci)) for ri, ci in zip(r, rc[keep] / r)]


def feasible_boundary(lambdas, n_points: int = 200) -> list[FeasiblePoint]:
    """Boundary of the feasible ``(r, cos θ)`` domain of ``M = diag(lambdas)``.

    The boundary consists of the two-eigenvalue mixtures between adjacent
    eigenvalues and between the extreme ones; each segment is sampled at
    ``n_points`` mixing weights. The extreme segment also contains the exact
    minimizer of ``cos θ``. Points with ``r = 0`` (annihilated states) are
    omitted.
    """
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    poly = feasible_polygon(lambdas)
    lam = poly[:, 1]
    if lam.size == 1:
        return [FeasiblePoint(float(lam[0]), 1.0)]
    points: list[FeasiblePoint] = []
    if lam.size > 2:
        for lo, hi in zip(lam[:-1], lam[1:]):
            points += _chord(hi, lo, n_points)
    lo, hi = lam[0], lam[-1]
    # weight lo/(hi+lo) on the largest eigenvalue minimizes cos θ
    return points + _chord(hi, lo, n_points, extra=[lo / (hi + lo)])


def in_feasible_domain(lambdas, r, cos_theta, slack: float = 1e-9) -> np.ndarray:
    """Whether each ``(r, cos θ)`` lies in the feasible domain, within ``slack``.

    Containment is tested in ``(r², r cos θ)`` coordinates, where the domain
    is the convex hull of :func:`feasible_polygon`.
    """
    poly = feasible_polygon(lambdas)
    r = np.asarray(r, dtype=float)
    pts = np.column_stack([r**2, r * np.asarray(cos_theta, dtype=float)])
    if len(poly) == 1:
        return np.linalg.norm(pts - poly[0], axis=1) <= slack
    if len(poly) == 2:
        a, b = poly
        t = np.clip((pts - a) @ (b - a) / ((b - a) @ (b - a)), 0.0, 1.0)
        return np.linalg.norm(pts - (a + t[:, None] * (b - a)), axis=1) <= slack
    # counter-clockwise order: along the curve by increasing λ is clockwise in (x, y)
    ring = poly[::-1]
    inside = np.ones(len(pts), dtype=bool)
    for p, q in zip(ring, np.roll(ring, -1, axis=0)):
        edge = q - p
        normal = np.array([-edge[1], edge[0]]) / np.linalg.norm(edge)
        inside &= (pts - p) @ normal >= -slack
    return inside


def maximize_normalizing_distance(lambdas, n_states: int = 100_000, seed: int = 0,
                                  rounds: int = 20) -> float:
    """Random-search estimate of ``max_ψ ½‖ψψ† − Mψψ†M/⟨ψ|M²|ψ⟩‖₁`` from below.

    Half of the budget is spent on Haar-random states; the rest on random
    perturbations of the best state found so far, with a shrinking step.
    Only the state weights matter, so the search runs over probability
    vectors ``|ψ_i|²``.
    """
    lam = _eigenvalues(lambdas)
    rng = np.random.default_rng(seed)

    def distance(p):
        p = p / p.sum(axis=1, keepdims=True)
        # 1 − cos²θ = Var_p(λ) / E_p(λ²), without cancellation
        r2 = p @ lam**2
        var = np.einsum("bi,bi->b", p, (lam[None, :] - (p @ lam)[:, None]) ** 2)
        return np.sqrt(np.clip(np.where(r2 > 0, var / np.where(r2 > 0, r2, 1.0), 0.0), 0.0, 1.0))

    first = n_states // 2
    p = np.abs(haar_states(first, lam.size, rng)) ** 2
    d = distance(p)
    best_p, best = p[np.argmax(d)], float(d.max())
    per_round = max(1, (n_states - first) // rounds)
    step = 0.5
    for _ in range(rounds):
        trial = np.abs(best_p + step * rng.standard_normal((per_round, lam.size)) * best_p.max())
        d = distance(trial)
        i = int(np.argmax(d))
        if d[i] > best:
            best, best_p = float(d[i]), trial[i] / trial[i].sum()
        step *= 0.7
    return best
