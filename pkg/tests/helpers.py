"""Random instances and independent oracles shared by the test modules."""
import contextlib
import time

import numpy as np

from qopdist.operations import QuantumOperation

ACCEPTANCE_LINES = []


@contextlib.contextmanager
def criterion(number, title):
    """Record one PASS/FAIL line per acceptance criterion (printed at session end)."""
    start = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE_LINES.append(
            f"[FAIL] AC{number:>2} {title} ({time.perf_counter() - start:.1f}s): "
            f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    detail = ", ".join(f"{k}={v}" for k, v in info.items())
    ACCEPTANCE_LINES.append(
        f"[PASS] AC{number:>2} {title} ({time.perf_counter() - start:.1f}s)"
        + (f": {detail}" if detail else ""))


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density(rng, n, rank=None):
    g = random_matrix(rng, n, rank or n)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, n):
    g = random_matrix(rng, n, n)
    return (g + g.conj().T) / 2


def haar_unitary(rng, n):
    q, r = np.linalg.qr(random_matrix(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(rng, n, m, k):
    k = max(k, -(-n // m))
    q, _ = np.linalg.qr(random_matrix(rng, k * m, n))
    return QuantumOperation([q[i * m:(i + 1) * m] for i in range(k)])


def random_operation(rng, n, m, k, scale=None):
    """Random trace-nonincreasing operation; largest eigenvalue of Σa†a is ``scale``."""
    kraus = [random_matrix(rng, m, n) for _ in range(k)]
    lam = np.linalg.eigvalsh(sum(a.conj().T @ a for a in kraus))[-1]
    scale = rng.uniform(0.3, 1.0) if scale is None else scale
    return QuantumOperation([a * np.sqrt(scale / lam) for a in kraus])


def random_full_rank_pair(rng, n=None, m=None):
    """Pair of random operations (dims 2-4, 1-3 Kraus) whose first Stinespring operator has full column rank."""
    while True:
        n_ = n or int(rng.integers(2, 5))
        m_ = m or int(rng.integers(2, 5))
        e = random_operation(rng, n_, m_, int(rng.integers(1, 4)))
        f = random_operation(rng, n_, m_, int(rng.integers(1, 4)))
        s = np.linalg.svd(np.vstack(e.kraus), compute_uv=False)
        if s.size == n_ and s[-1] > 1e-6 * s[0]:
            return e, f


def hull_distance_to_origin(points):
    """Euclidean distance from 0 to the convex hull of complex ``points`` (brute force).

    The origin is inside the hull iff no open half-plane through it holds
    every point, i.e. the largest angular gap between sorted arguments is
    at most π. Otherwise the nearest hull point lies on a segment between
    two of the points (or is a point itself), so all pairs are checked.
    """
    pts = np.asarray(points, dtype=complex)
    ang = np.sort(np.angle(pts))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    if gaps.max() <= np.pi + 1e-12:
        return 0.0
    best = np.abs(pts).min()
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            a, b = pts[i], pts[j]
            d = b - a
            if abs(d) == 0:
                continue
            t = np.clip(-(np.conj(d) * a).real / abs(d) ** 2, 0.0, 1.0)
            best = min(best, abs(a + t * d))
    return float(best)


def unitary_diamond_oracle(u, v):
    """Half the diamond norm between unitary channels: √(1 − ν²), ν the hull distance of eig(U†V)."""
    nu = hull_distance_to_origin(np.linalg.eigvals(u.conj().T @ v))
    return float(np.sqrt(max(0.0, 1.0 - nu**2)))


def grid_normalizing_distance(lambdas, points=200_001):
    """max over two-eigenvalue superpositions of √(1 − cos²θ) on a dense weight grid."""
    lam = np.asarray(lambdas, dtype=float)
    x = np.linspace(0.0, 1.0, points)
    best = 0.0
    for i in range(lam.size):
        for j in range(i + 1, lam.size):
            r2 = x * lam[i] ** 2 + (1 - x) * lam[j] ** 2
            ok = r2 > 0
            cos = (x[ok] * lam[i] + (1 - x[ok]) * lam[j]) / np.sqrt(r2[ok])
            best = max(best, float(np.sqrt(np.clip(1 - cos**2, 0, 1)).max()))
    return best


def trace_distance(rho, sigma):
    """Eigenvalue route, independent of qopdist.linalg.trace_norm."""
    return 0.5 * float(np.abs(np.linalg.eigvalsh(rho - sigma)).sum())
