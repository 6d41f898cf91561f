"""Random pure and mixed states."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .linalg import DensityMatrix, StateVector


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    """Uniform point on the unit sphere (normalized complex Gaussian vector)."""
    return StateVector.normalized(complex_normal(rng, math.prod(dims)), dims)


def random_mixed_state(
    dims: Sequence[int], rng: np.random.Generator, ancilla_dim: int | None = None
) -> DensityMatrix:
    """Marginal of a random pure state on ``dims`` plus an ancilla.

    The ancilla defaults to the full dimension of ``dims``, i.e. the state is a
    2-qubit marginal of a random 4-qubit pure state when ``dims == (2, 2)``.
    """
    d = math.prod(dims)
    k = d if ancilla_dim is None else ancilla_dim
    psi = complex_normal(rng, (d, k))
    psi /= np.linalg.norm(psi)
    rho = psi @ psi.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T), dims)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    q, r = np.linalg.qr(complex_normal(rng, (d, d)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
