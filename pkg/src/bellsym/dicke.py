"""Permutation-symmetric multiqubit pure states in the Dicke basis.

A symmetric state of N = 2j qubits is written as sum_m c_m |j, m>, with the
coefficient vector ordered m = -j, ..., j. Qubit state |0> is spin up, so
|j, j> is |00...0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chsh import chen_criterion, chsh_value
from .linalg import DensityMatrix, hermitian_eigenvalues
from .sampling import complex_normal
from .tolerances import TOL


def _two_j(j) -> int:
    two_j = 2 * Fraction(j).limit_denominator(1000)
    if two_j.denominator != 1 or abs(float(two_j) - 2 * float(j)) > 1e-12:
        raise ValueError(f"j = {j} is not a half-integer")
    if two_j < 1:
        raise ValueError(f"j must be >= 1/2, got {j}")
    return int(two_j)


@dataclass(frozen=True)
class CollectiveSpinOps:
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray
    jx: np.ndarray
    jy: np.ndarray


def collective_ops(j) -> CollectiveSpinOps:
    """Angular momentum matrices in the |j, m> basis, row 0 <-> m = -j."""
    n = _two_j(j)
    jj = n / 2
    m = np.arange(n + 1) / 1.0 - jj
    jz = np.diag(m).astype(np.complex128)
    jplus = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for k in range(n):
        jplus[k + 1, k] = math.sqrt(jj * (jj + 1) - m[k] * (m[k] + 1))
    jminus = jplus.conj().T
    return CollectiveSpinOps(
        jz=jz,
        jplus=jplus,
        jminus=jminus,
        jx=0.5 * (jplus + jminus),
        jy=-0.5j * (jplus - jminus),
    )


@dataclass(frozen=True, eq=False)
class DickeState:
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.complex128).reshape(-1)
        if c.size < 4:
            raise ValueError(f"need N = 2j >= 3 qubits, got {c.size - 1}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > TOL.norm:
            raise ValueError(f"coefficients have norm {norm!r}, expected 1")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def normalized(cls, coefficients) -> "DickeState":
        c = np.asarray(coefficients, dtype=np.complex128)
        return cls(c / np.linalg.norm(c))

    @classmethod
    def basis(cls, n_qubits: int, m) -> "DickeState":
        """The single Dicke state |j = n_qubits/2, m>."""
        k = round(m + n_qubits / 2)
        if not 0 <= k <= n_qubits or abs(k - (m + n_qubits / 2)) > 1e-12:
            raise ValueError(f"m = {m} invalid for N = {n_qubits}")
        c = np.zeros(n_qubits + 1, dtype=np.complex128)
        c[k] = 1.0
        return cls(c)

    @property
    def n_qubits(self) -> int:
        return self.coefficients.size - 1

    @property
    def j(self) -> float:
        return self.n_qubits / 2


def random_dicke_state(n_qubits: int, rng: np.random.Generator) -> DickeState:
    return DickeState.normalized(complex_normal(rng, n_qubits + 1))


@dataclass(frozen=True)
class SymmetricRdm:
    """Elements of the exchange-symmetric two-qubit marginal, basis |00>,|01>,|10>,|11>."""

    v_plus: float
    v_minus: float
    w: float
    y: float
    x_plus: complex
    x_minus: complex
    u: complex

    def matrix(self) -> np.ndarray:
        vp, vm, w, y = self.v_plus, self.v_minus, self.w, self.y
        xp, xm, u = self.x_plus, self.x_minus, self.u
        return np.array(
            [
                [vp, np.conj(xp), np.conj(xp), np.conj(u)],
                [xp, w, np.conj(y), np.conj(xm)],
                [xp, y, w, np.conj(xm)],
                [u, xm, xm, vm],
            ],
            dtype=np.complex128,
        )

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(self.matrix(), (2, 2))

    def single_qubit_purity(self) -> float:
        return (self.v_plus + self.w) ** 2 + (self.v_minus + self.w) ** 2 + 2 * abs(self.x_plus + self.x_minus) ** 2

    def pair_purity(self) -> float:
        return (
            self.v_plus**2
            + self.v_minus**2
            + 2 * abs(self.u) ** 2
            + 4 * (abs(self.x_plus) ** 2 + abs(self.x_minus) ** 2 + self.w**2)
        )

    def correlation_matrix(self) -> np.ndarray:
        """Pauli correlation matrix written directly in terms of the elements."""
        w, u, dx = self.w, self.u, self.x_plus - self.x_minus
        return np.array(
            [
                [2 * (w + u.real), 2 * u.imag, 2 * dx.real],
                [2 * u.imag, 2 * (w - u.real), 2 * dx.imag],
                [2 * dx.real, 2 * dx.imag, 1 - 4 * w],
            ]
        )


def _expect(op: np.ndarray, c: np.ndarray) -> complex:
    return complex(np.vdot(c, op @ c))


def rdm_from_dicke(psi: DickeState) -> SymmetricRdm:
    """Two-qubit marginal from collective-spin expectation values."""
    n = psi.n_qubits
    ops = collective_ops(psi.j)
    c = psi.coefficients
    jz = _expect(ops.jz, c).real
    jz2 = _expect(ops.jz @ ops.jz, c).real
    jp = _expect(ops.jplus, c)
    anti = _expect(ops.jplus @ ops.jz + ops.jz @ ops.jplus, c)
    jp2 = _expect(ops.jplus @ ops.jplus, c)

    denom = 4 * n * (n - 1)
    w = (n * n - 4 * jz2) / denom
    return SymmetricRdm(
        v_plus=(n * n - 2 * n + 4 * jz2 + 4 * jz * (n - 1)) / denom,
        v_minus=(n * n - 2 * n + 4 * jz2 - 4 * jz * (n - 1)) / denom,
        w=w,
        y=w,
        x_plus=((n - 1) * jp + anti) / (2 * n * (n - 1)),
        x_minus=((n - 1) * jp - anti) / (2 * n * (n - 1)),
        u=jp2 / (n * (n - 1)),
    )


MAX_BRUTE_FORCE_QUBITS = 12


def dicke_to_qubits(psi: DickeState) -> np.ndarray:
    """Expand into the 2^N computational basis (qubit 0 is the most significant bit)."""
    n = psi.n_qubits
    if n > MAX_BRUTE_FORCE_QUBITS:
        raise ValueError(f"brute-force expansion limited to N <= {MAX_BRUTE_FORCE_QUBITS}, got {n}")
    idx = np.arange(2**n)
    n_down = np.array([bin(i).count("1") for i in idx])
    n_up = n - n_down
    # coefficient index m + j equals the number of up spins
    amp = psi.coefficients[n_up] / np.sqrt([math.comb(n, k) for k in n_up])
    return amp


def brute_force_rdm(psi: DickeState, keep: tuple[int, int] = (0, 1)) -> DensityMatrix:
    n = psi.n_qubits
    t = dicke_to_qubits(psi).reshape((2,) * n)
    rest = [q for q in range(n) if q not in keep]
    m = np.transpose(t, list(keep) + rest).reshape(4, -1)
    rho = m @ m.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T), (2, 2))


@dataclass(frozen=True)
class Theorem1Result:
    chsh: float
    passed: bool


def theorem1_check(psi: DickeState, eps: float = TOL.chsh_eps) -> Theorem1Result:
    """CHSH value of the two-qubit marginal of a symmetric state; passes when <= 2."""
    value = chsh_value(rdm_from_dicke(psi).density_matrix()).value
    return Theorem1Result(value, value <= 2.0 + eps)


@dataclass(frozen=True)
class EigenIdentity:
    lhs: float  # sum of pairwise products of the correlation-matrix eigenvalues
    rhs: float  # 4 (w - 3 w^2 - |u|^2 - |x+ - x-|^2)
    eigenvalue_sum: float
    single_qubit_purity: float
    pair_purity: float
    extendible: bool


def eigenidentity_check(psi: DickeState) -> EigenIdentity:
    rdm = rdm_from_dicke(psi)
    lam = hermitian_eigenvalues(rdm.correlation_matrix())
    lhs = lam[0] * lam[1] + lam[1] * lam[2] + lam[0] * lam[2]
    rhs = 4 * (rdm.w - 3 * rdm.w**2 - abs(rdm.u) ** 2 - abs(rdm.x_plus - rdm.x_minus) ** 2)
    return EigenIdentity(
        lhs=float(lhs),
        rhs=float(rhs),
        eigenvalue_sum=float(np.sum(lam)),
        single_qubit_purity=float(rdm.single_qubit_purity()),
        pair_purity=float(rdm.pair_purity()),
        extendible=chen_criterion(rdm.density_matrix()).extendible,
    )
