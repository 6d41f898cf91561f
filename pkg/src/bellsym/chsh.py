"""CHSH values of two-qubit states and the qubit symmetric-extension tests."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, determinant, hermitian_eigenvalues, partial_trace
from .optimize import CHSH, nelder_mead
from .tolerances import TOL

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def _two_qubit(rho) -> DensityMatrix:
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, (2, 2))
    if rho.dims != (2, 2):
        raise ValueError(f"expected a 2-qubit state, got subsystem dims {rho.dims}")
    return rho


def correlation_tensor(rho) -> np.ndarray:
    """3x3 real matrix t[i, j] = tr(rho sigma_i (x) sigma_j)."""
    m = _two_qubit(rho).matrix
    t = np.empty((3, 3))
    for i, si in enumerate(PAULI):
        for j, sj in enumerate(PAULI):
            t[i, j] = np.real(np.trace(m @ np.kron(si, sj)))
    return t


@dataclass(frozen=True)
class ChshReport:
    value: float
    violates: bool
    eigenvalues_U: tuple[float, float, float]


def chsh_value(rho) -> ChshReport:
    """Closed-form CHSH maximum 2*sqrt(u + v) from the two largest eigenvalues of T^T T.

    ``violates`` compares strictly against 2; callers apply their own guard band.
    """
    t = correlation_tensor(rho)
    lam = hermitian_eigenvalues(t.T @ t)[::-1]
    # U is PSD; round-off can leave a -1e-17 eigenvalue
    value = 2.0 * math.sqrt(max(0.0, lam[0] + lam[1]))
    return ChshReport(value, value > 2.0, (float(lam[0]), float(lam[1]), float(lam[2])))


@dataclass(frozen=True)
class MeasurementFrame:
    """Bloch directions of the observables A, A', B, B'."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    @classmethod
    def from_angles(cls, x) -> "MeasurementFrame":
        x = np.asarray(x, dtype=float).reshape(4, 2)
        vecs = [
            np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
            for th, ph in x
        ]
        return cls(*vecs)

    def observables(self):
        return tuple(sum(n[i] * PAULI[i] for i in range(3)) for n in (self.a, self.a_prime, self.b, self.b_prime))


def chsh_expectation(rho, frame: MeasurementFrame) -> float:
    """<AB + AB' + A'B - A'B'> for the observables of ``frame``."""
    m = _two_qubit(rho).matrix
    a, ap, b, bp = frame.observables()
    op = np.kron(a, b) + np.kron(a, bp) + np.kron(ap, b) - np.kron(ap, bp)
    return float(np.real(np.trace(m @ op)))


def chsh_direct(rho, restarts: int = 16, seed: int = 0) -> float:
    """Best CHSH expectation found by multi-start simplex search over measurement frames.

    A lower bound on :func:`chsh_value` up to optimizer tolerance. Restart ``i``
    starts from angles drawn with ``numpy.random.default_rng([seed, i])``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    m = _two_qubit(rho).matrix
    best = -math.inf
    for i in range(restarts):
        rng = np.random.default_rng([seed, i])
        x0 = np.concatenate([[rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)] for _ in range(4)])
        _, fx, _ = nelder_mead(CHSH, x0, m, step=0.5, tol=1e-12)
        if -fx > best:
            best = -fx
    return best


@dataclass(frozen=True)
class ChenResult:
    extendible: bool
    lhs: float
    rhs: float


def chen_criterion(rho) -> ChenResult:
    """Two-qubit symmetric extendibility: tr(rho_B^2) >= tr(rho_AB^2) - 4 sqrt(det rho_AB)."""
    rho = _two_qubit(rho)
    det = determinant(rho.matrix).real
    if det < -TOL.det_clamp:
        raise ValueError(f"det(rho) = {det:.3g} is negative; not a valid state")
    det = max(det, 0.0)
    lhs = partial_trace(rho, [1]).purity()
    rhs = rho.purity() - 4.0 * math.sqrt(det)
    return ChenResult(lhs >= rhs - TOL.chen_slack, lhs, rhs)


@dataclass(frozen=True)
class MonogamyCheck:
    values: tuple[ChshReport, ChshReport, ChshReport]  # AB, BC, AC
    violations: int


def chsh_monogamy_check(rho, eps: float = TOL.chsh_eps) -> MonogamyCheck:
    """CHSH values of the AB, BC and AC marginals of a 3-qubit state."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, (2, 2, 2))
    if rho.dims != (2, 2, 2):
        raise ValueError(f"expected a 3-qubit state, got subsystem dims {rho.dims}")
    reports = tuple(chsh_value(partial_trace(rho, keep)) for keep in ((0, 1), (1, 2), (0, 2)))
    return MonogamyCheck(reports, sum(r.value > 2.0 + eps for r in reports))


class QubitVerdict(enum.Enum):
    NO_SYMMETRIC_EXTENSION_BELL_VIOLATION = "NoSymmetricExtension_BellViolation"
    EXTENDIBLE_CHEN_CRITERION = "Extendible_ChenCriterion"
    NOT_EXTENDIBLE_CHEN_CRITERION = "NotExtendible_ChenCriterion"


def nonextendibility_verdict_qubit(rho, eps: float = TOL.chsh_eps) -> QubitVerdict:
    if chsh_value(rho).value > 2.0 + eps:
        return QubitVerdict.NO_SYMMETRIC_EXTENSION_BELL_VIOLATION
    if chen_criterion(rho).extendible:
        return QubitVerdict.EXTENDIBLE_CHEN_CRITERION
    return QubitVerdict.NOT_EXTENDIBLE_CHEN_CRITERION
