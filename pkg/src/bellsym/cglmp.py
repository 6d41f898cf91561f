"""CGLMP correlation function for two qutrits.

Measurements follow the phase-then-Fourier family: party A applies
``A_k = F @ diag(exp(-i phi_k))`` and party B applies
``B_l = conj(F) @ diag(exp(-i varphi_l))`` before measuring in the
computational basis, where ``F[a, b] = exp(2 pi i a b / 3) / sqrt(3)``.
All outcome shifts are taken modulo 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix
from .optimize import CGLMP, nelder_mead
from ._kernels import neg_i3

TWO_PI = 2.0 * math.pi
LHV_BOUND = 2.0


def fourier_matrix() -> np.ndarray:
    a = np.arange(3)
    return np.exp(2j * math.pi * np.outer(a, a) / 3) / math.sqrt(3)


@dataclass(frozen=True, eq=False)
class AngleSet:
    """The twelve measurement phases; ``phi[k, j]`` for party A, ``varphi[l, j]`` for B."""

    phi: np.ndarray
    varphi: np.ndarray

    def __post_init__(self):
        for name in ("phi", "varphi"):
            v = np.array(getattr(self, name), dtype=float).reshape(2, 3)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} angles must be finite")
            v = np.mod(v, TWO_PI)
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @classmethod
    def from_vector(cls, x) -> "AngleSet":
        x = np.asarray(x, dtype=float).reshape(12)
        return cls(x[:6], x[6:])

    @classmethod
    def zeros(cls) -> "AngleSet":
        return cls(np.zeros((2, 3)), np.zeros((2, 3)))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.phi.ravel(), self.varphi.ravel()])


def measurement_operators(angles: AngleSet):
    """Return the unitaries (A1, A2, B1, B2)."""
    f = fourier_matrix()
    a = [f @ np.diag(np.exp(-1j * angles.phi[k])) for k in range(2)]
    b = [f.conj() @ np.diag(np.exp(-1j * angles.varphi[l])) for l in range(2)]
    return a[0], a[1], b[0], b[1]


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """``p[m, n, a, b] = P(A_m = a, B_n = b)`` with settings indexed from 0."""

    p: np.ndarray

    def normalization_error(self) -> float:
        return float(np.max(np.abs(self.p.sum(axis=(2, 3)) - 1.0)))

    def range_error(self) -> float:
        """How far any entry falls outside [0, 1]."""
        return float(max(0.0, -self.p.min(), self.p.max() - 1.0))

    def signalling_error(self) -> float:
        """Largest change in one party's marginal when the other party switches setting."""
        alice = self.p.sum(axis=3)  # [m, n, a]
        bob = self.p.sum(axis=2)  # [m, n, b]
        return float(
            max(
                np.max(np.abs(alice[:, 0] - alice[:, 1])),
                np.max(np.abs(bob[0] - bob[1])),
            )
        )


def _two_qutrit(rho) -> DensityMatrix:
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, (3, 3))
    if rho.dims != (3, 3):
        raise ValueError(f"expected a 2-qutrit state, got subsystem dims {rho.dims}")
    return rho


def outcome_distribution(rho, angles: AngleSet) -> OutcomeDistribution:
    """Joint probabilities tr(Pi_a (x) Pi_b  U rho U^dagger) with U = A_m (x) B_n."""
    m = _two_qutrit(rho).matrix
    ops = measurement_operators(angles)
    a_ops, b_ops = ops[:2], ops[2:]
    proj = [np.diag(np.eye(3)[k]) for k in range(3)]
    p = np.empty((2, 2, 3, 3))
    for i, a_op in enumerate(a_ops):
        for j, b_op in enumerate(b_ops):
            u = np.kron(a_op, b_op)
            rotated = u @ m @ u.conj().T
            for a in range(3):
                for b in range(3):
                    p[i, j, a, b] = np.real(np.trace(np.kron(proj[a], proj[b]) @ rotated))
    return OutcomeDistribution(p)


def i3_from_distribution(dist: OutcomeDistribution) -> float:
    p = dist.p
    total = 0.0
    for j in range(3):
        j1 = (j + 1) % 3
        total += p[0, 0, j, j] + p[1, 0, j, j1] + p[1, 1, j, j] + p[0, 1, j, j]
        total -= p[0, 0, j, j1] + p[1, 0, j, j] + p[1, 1, j, j1] + p[0, 1, j1, j]
    return float(total)


def i3_value(rho, angles: AngleSet) -> float:
    """CGLMP expression I3 for one choice of measurement phases."""
    return i3_from_distribution(outcome_distribution(rho, angles))


def state_factor(rho) -> np.ndarray:
    """V with rho = V V^dagger, one column per non-negligible eigenvalue."""
    lam, vec = np.linalg.eigh(_two_qutrit(rho).matrix)
    keep = lam > 1e-14 * max(lam[-1], 1e-300)
    return np.ascontiguousarray(vec[:, keep] * np.sqrt(lam[keep]))


def i3_fast(rho, angles: AngleSet) -> float:
    """Compiled evaluation of :func:`i3_value`, as seen by the optimizer."""
    return -float(neg_i3(angles.to_vector(), state_factor(rho)))


@dataclass(frozen=True)
class CglmpReport:
    value: float
    best_angles: AngleSet
    restarts_used: int
    evaluations: int


def cglmp_max(rho, restarts: int = 24, seed: int = 0, tol: float = 1e-8) -> CglmpReport:
    """Maximize I3 over the twelve phases by multi-start simplex search.

    Restart ``i`` starts from uniform angles drawn with
    ``numpy.random.default_rng([seed, i])``; the best restart wins, ties going
    to the lowest index. The result is a lower bound on the Bell value.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = state_factor(rho)
    best_x, best_f = None, math.inf
    evaluations = 0
    for i in range(restarts):
        x0 = np.random.default_rng([seed, i]).uniform(0.0, TWO_PI, 12)
        x, fx, nfev = nelder_mead(CGLMP, x0, m, step=0.5, tol=tol)
        evaluations += nfev
        if fx < best_f:
            best_x, best_f = x, fx
    return CglmpReport(-best_f, AngleSet.from_vector(best_x), restarts, evaluations)


def psi_gamma(gamma: float) -> np.ndarray:
    """Amplitudes of (|00> + gamma|11> + |22>) / sqrt(2 + gamma^2)."""
    v = np.zeros(9, dtype=np.complex128)
    v[0], v[4], v[8] = 1.0, gamma, 1.0
    return v / math.sqrt(2.0 + gamma * gamma)


OPTIMAL_GAMMA = 0.7923
MAX_CGLMP_VALUE = 1.0 + math.sqrt(11.0 / 3.0)
