"""Dense complex linear algebra for small quantum systems (dimension <= 27).

Matrices are plain complex ``numpy`` arrays. Two thin value types carry
subsystem bookkeeping: :class:`StateVector` for kets and
:class:`DensityMatrix` for states. Subsystem 0 is the leftmost tensor factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .tolerances import TOL


class NumericalError(RuntimeError):
    """An iterative routine failed to reach its tolerance."""


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


def _check_dims(dim: int, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid subsystem dimensions {dims}")
    if math.prod(dims) != dim:
        raise ValueError(f"subsystem dimensions {dims} do not multiply to {dim}")
    return dims


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes, dims: Sequence[int] | None = None):
        v = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValueError("amplitudes must be finite")
        dims = (v.size,) if dims is None else dims
        object.__setattr__(self, "dims", _check_dims(v.size, dims))
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > TOL.norm:
            raise ValueError(f"state vector norm {norm!r} differs from 1")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @classmethod
    def normalized(cls, amplitudes, dims: Sequence[int] | None = None) -> "StateVector":
        v = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / norm, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None, *, check_psd: bool = True):
        m = as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        dims = (m.shape[0],) if dims is None else dims
        object.__setattr__(self, "dims", _check_dims(m.shape[0], dims))
        herm = np.max(np.abs(m - m.conj().T))
        if herm > TOL.state_hermiticity:
            raise ValueError(f"density matrix is not Hermitian (deviation {herm:.3g})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TOL.trace:
            raise ValueError(f"density matrix trace {tr!r} differs from 1")
        if check_psd:
            lam_min = hermitian_eigenvalues(m)[0]
            if lam_min < TOL.psd_floor:
                raise ValueError(f"density matrix has negative eigenvalue {lam_min:.3g}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; entry (i*b.rows + k, j*b.cols + l) is a[i,j]*b[k,l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(m) -> complex:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("trace of a non-square matrix")
    return complex(np.trace(m))


def outer(v: StateVector) -> DensityMatrix:
    a = v.amplitudes
    # rank one with unit trace; skip the eigen-decomposition
    return DensityMatrix(np.outer(a, a.conj()), v.dims, check_psd=False)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original order regardless of how
    ``keep`` is ordered.
    """
    n = len(rho.dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    for k in keep:
        if not 0 <= k < n:
            raise ValueError(f"subsystem index {k} out of range for {n} subsystems")
    if len(keep) == n:
        return rho
    t = rho.matrix.reshape(rho.dims + rho.dims)
    rows = list(range(n))
    cols = [k if k not in keep else n + k for k in range(n)]
    out = [k for k in keep] + [n + k for k in keep]
    reduced = np.einsum(t, rows + cols, out)
    d = math.prod(rho.dims[k] for k in keep)
    return DensityMatrix(reduced.reshape(d, d), [rho.dims[k] for k in keep], check_psd=False)


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic complex Jacobi.

    Sweeps continue until the off-diagonal Frobenius norm drops below
    ``TOL.jacobi_offdiag`` (scaled by the matrix norm when that exceeds 1).
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n != a.shape[1]:
        raise ValueError(f"eigenvalues of a non-square matrix {a.shape}")
    herm = np.max(np.abs(a - a.conj().T)) if n else 0.0
    if herm > TOL.hermiticity:
        raise ValueError(f"matrix is not Hermitian (deviation {herm:.3g})")
    a = 0.5 * (a + a.conj().T)
    threshold = TOL.jacobi_offdiag * max(1.0, float(np.linalg.norm(a)))

    for _ in range(TOL.jacobi_max_sweeps + 1):
        off = float(np.linalg.norm(a[~np.eye(n, dtype=bool)]))
        if off < threshold:
            return np.sort(np.real(np.diag(a)))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g < 1e-150:
                    continue
                phase = np.conj(apq / g)
                theta = (a[q, q].real - a[p, p].real) / (2.0 * g)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase, c * phase]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    raise NumericalError(f"Jacobi iteration did not converge in {TOL.jacobi_max_sweeps} sweeps")


def determinant(m) -> complex:
    """Determinant by LU decomposition with partial pivoting (dimension <= 4)."""
    a = as_matrix(m)
    n = a.shape[0]
    if n != a.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    if n > 4:
        raise ValueError(f"determinant supports dimension <= 4, got {n}")
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if a[piv, k] == 0:
            return 0j
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        det *= a[k, k]
        a[k + 1:, k:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k:])
    return complex(det)
