"""Numerical tolerances shared by the library and its tests."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # input validation
    hermiticity: float = 1e-10
    state_hermiticity: float = 1e-12
    trace: float = 1e-12
    norm: float = 1e-12
    psd_floor: float = -1e-10
    # Jacobi eigensolver
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    # Bell-violation guard bands
    chsh_eps: float = 1e-9
    cglmp_eps: float = 1e-6
    # Chen criterion
    det_clamp: float = 1e-12
    chen_slack: float = 1e-10


TOL = Tolerances()
