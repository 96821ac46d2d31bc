"""Linear-optics case studies: the lossy beam splitter and the NS gate with dark counts."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .operations import QuantumOperation, require_valid


@dataclass(frozen=True)
class BeamSplitterParams:
    """Beam splitter angles and amplitude retention for reflection/transmission."""

    theta: float = np.pi / 4
    phi: float = 0.0
    gamma_r: float = 1.0
    gamma_t: float = 1.0

    def __post_init__(self):
        for name in ("gamma_r", "gamma_t"):
            g = getattr(self, name)
            if not 0.0 <= g <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {g}")

    @property
    def loss_ratio(self) -> float:
        return self.gamma_r / self.gamma_t

    @classmethod
    def from_loss_ratio(cls, ratio: float, theta: float = np.pi / 4, phi: float = 0.0):
        """Parameters with ``gamma_r / gamma_t == ratio`` and the larger of the two equal to 1."""
        if ratio <= 0:
            raise DomainError("loss ratio must be positive")
        if ratio <= 1:
            return cls(theta, phi, gamma_r=ratio, gamma_t=1.0)
        return cls(theta, phi, gamma_r=1.0, gamma_t=1.0 / ratio)


@dataclass(frozen=True)
class NsGateParams:
    mu: float = 0.0  # dark count rate

    def __post_init__(self):
        if not self.mu >= 0:
            raise DomainError(f"dark count rate must be >= 0, got {self.mu}")


def beam_splitter_matrix(p: BeamSplitterParams) -> np.ndarray:
    c, s = np.cos(p.theta), np.sin(p.theta)
    return np.array([
        [p.gamma_t * c, -p.gamma_r * s * np.exp(1j * p.phi)],
        [p.gamma_r * s * np.exp(-1j * p.phi), p.gamma_t * c],
    ])


def beam_splitter(p: BeamSplitterParams) -> QuantumOperation:
    return QuantumOperation([beam_splitter_matrix(p)])


def beam_splitter_closed_form(theta: float, gamma_r: float, gamma_t: float) -> float:
    """Exact distance between the ideal splitter and one with retention ``gamma_r``, ``gamma_t``."""
    c, s = np.cos(theta), np.sin(theta)
    num = abs(gamma_r - gamma_t) * c * s
    den2 = gamma_t**2 * c**2 + gamma_r**2 * s**2
    if den2 == 0:
        if num == 0:
            raise DomainError("closed form undefined: the lossy splitter annihilates every state")
        raise DomainError("closed form has a zero denominator")
    return float(abs(num) / np.sqrt(den2))


def ns_e10() -> np.ndarray:
    """Kraus operator for ancilla outcome |10⟩ (photon-number basis, 3 -> 4 modes)."""
    e = np.zeros((4, 3))
    e[0, 0] = 0.5
    e[1, 1] = 0.5
    e[2, 2] = -0.5
    return e


def ns_e00() -> np.ndarray:
    """Kraus operator for ancilla outcome |00⟩; shifts |j⟩ to |j+1⟩."""
    e = np.zeros((4, 3))
    e[1, 0] = 1 / 2 ** 0.25
    e[2, 1] = (-2 + np.sqrt(2)) / 2 ** 0.25
    e[3, 2] = np.sqrt(6) * (3 / 2 ** 0.75 - 2 ** 0.75)
    return e


def ns_gate_pair(p: NsGateParams) -> tuple[QuantumOperation, QuantumOperation]:
    """Ideal NS gate ``{E10}`` and its dark-count counterpart ``{E10, √μ E00}``.

    Raises:
        ValidationError: ``mu`` is so large that the faulty gate increases trace.
    """
    ideal = QuantumOperation([ns_e10()])
    faulty = QuantumOperation([ns_e10(), np.sqrt(p.mu) * ns_e00()])
    require_valid(faulty, f"faulty NS gate (mu={p.mu})")
    return ideal, faulty
