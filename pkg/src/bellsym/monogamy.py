"""Monogamy of CGLMP violations across the marginals of 3-qutrit pure states."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .cglmp import AngleSet, CglmpReport, cglmp_max
from .linalg import DensityMatrix, StateVector
from .sampling import complex_normal
from .tolerances import TOL

QUTRITS3 = (3, 3, 3)
PAIRS = ((0, 1), (1, 2), (0, 2))  # AB, BC, AC
WORKERS_ENV = "BELLSYM_WORKERS"


def derive_seed(*parts: int) -> int:
    """Deterministic 32-bit seed from a tuple of non-negative integers."""
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def random_3qutrit(seed: int, index: int) -> StateVector:
    """Uniformly random 3-qutrit pure state, reproducible from ``(seed, index)``."""
    rng = np.random.default_rng([seed, index])
    return StateVector.normalized(complex_normal(rng, 27), QUTRITS3)


def rdm_triple(psi: StateVector) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """Two-qutrit marginals (AB, BC, AC) of a 3-qutrit pure state."""
    if psi.dims != QUTRITS3:
        raise ValueError(f"expected a 3-qutrit state, got subsystem dims {psi.dims}")
    t = psi.amplitudes.reshape(QUTRITS3)
    out = []
    for keep in PAIRS:
        traced = [q for q in range(3) if q not in keep][0]
        m = np.moveaxis(t, traced, -1).reshape(9, 3)
        rho = m @ m.conj().T
        out.append(DensityMatrix(0.5 * (rho + rho.conj().T), (3, 3)))
    return tuple(out)


@dataclass(frozen=True)
class ScanRecord:
    index: int
    seed: int
    b_ab: float
    b_bc: float
    b_ac: float
    violations: int
    double_violation: bool
    # maximizing phases for AB, BC, AC; not part of the tabular output
    angles: tuple[AngleSet, ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_values(
        cls,
        index: int,
        seed: int,
        values: Sequence[float],
        angles: Sequence[AngleSet] | None = None,
        eps: float = TOL.cglmp_eps,
    ) -> "ScanRecord":
        n = sum(v > 2.0 + eps for v in values)
        return cls(index, seed, *(float(v) for v in values), n, n >= 2, None if angles is None else tuple(angles))

    @property
    def values(self) -> tuple[float, float, float]:
        return (self.b_ab, self.b_bc, self.b_ac)

    @property
    def second_largest(self) -> float:
        return sorted(self.values)[1]


@dataclass(frozen=True)
class ScanSummary:
    n_states: int
    max_second_largest: float
    double_violations: int


def bell_reports(psi: StateVector, restarts: int, seed: int, index: int) -> tuple[CglmpReport, ...]:
    """CGLMP maximization of the AB, BC and AC marginals.

    Marginal ``k`` uses the optimizer seed ``derive_seed(seed, index, k)``.
    """
    return tuple(
        cglmp_max(rho, restarts=restarts, seed=derive_seed(seed, index, k))
        for k, rho in enumerate(rdm_triple(psi))
    )


def scan_state(psi: StateVector, seed: int, index: int, restarts: int) -> ScanRecord:
    reports = bell_reports(psi, restarts, seed, index)
    return ScanRecord.from_values(index, seed, [r.value for r in reports], [r.best_angles for r in reports])


def _scan_one(args) -> ScanRecord:
    seed, index, restarts = args
    return scan_state(random_3qutrit(seed, index), seed, index, restarts)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def iter_monogamy_scan(
    n_states: int, seed: int, restarts: int = 24, workers: int | None = None
) -> Iterator[ScanRecord]:
    """Yield scan records in index order; worker count never changes the results."""
    if n_states < 1:
        raise ValueError("n_states must be >= 1")
    workers = default_workers() if workers is None else workers
    jobs = ((seed, i, restarts) for i in range(n_states))
    if workers <= 1:
        yield from map(_scan_one, jobs)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_scan_one, jobs, chunksize=4)


def summarize(records: Sequence[ScanRecord]) -> ScanSummary:
    return ScanSummary(
        n_states=len(records),
        max_second_largest=max(r.second_largest for r in records),
        double_violations=sum(r.double_violation for r in records),
    )


def monogamy_scan(
    n_states: int, seed: int, restarts: int = 24, workers: int | None = None
) -> tuple[list[ScanRecord], ScanSummary]:
    records = list(iter_monogamy_scan(n_states, seed, restarts, workers))
    return records, summarize(records)


# Kets of the two gamma families, as (a, b, c) digits of |abc>.
_PSI1_ONES = ("000", "001", "002", "110", "111", "112", "221", "222")
_PSI1_GAMMA = ("010", "020", "112", "101", "121", "212")
_PSI2_ONES = ("000", "111", "222")
_PSI2_C1 = ("001", "002", "110", "112", "220", "221")
_PSI2_C2 = ("100", "200", "011", "211", "022", "122")
_PSI2_C3 = ("010", "020", "101", "121", "202", "212")


@dataclass(frozen=True)
class GammaFamily:
    family_id: str
    gamma: float

    def __post_init__(self):
        if self.family_id not in ("psi1", "psi2"):
            raise ValueError(f"unknown family {self.family_id!r}; expected psi1 or psi2")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")
        if self.family_id == "psi2" and 10 * self.gamma + 0.01 == 0:
            raise ValueError("psi2 is undefined at gamma = -0.001")


def psi2_coefficients(gamma: float) -> tuple[float, float, float]:
    c1 = 1.0 / (10 * gamma + 0.01)
    c2 = -3 * gamma * (gamma - 1.4) * math.exp(-gamma)
    c3 = gamma * (gamma - 1)
    return c1, c2, c3


def _ket(label: str) -> int:
    a, b, c = (int(ch) for ch in label)
    return 9 * a + 3 * b + c


def _place(v: np.ndarray, kets, coeff: float) -> None:
    for k in kets:
        v[_ket(k)] += coeff


def gamma_state(family: GammaFamily | str, gamma: float | None = None) -> StateVector:
    """Literal ket expansion of a gamma family, renormalized.

    Kets listed twice (|112> in psi1) accumulate both coefficients.
    """
    if not isinstance(family, GammaFamily):
        family = GammaFamily(family, gamma)
    g = family.gamma
    v = np.zeros(27, dtype=np.complex128)
    if family.family_id == "psi1":
        _place(v, _PSI1_ONES, 1.0)
        _place(v, _PSI1_GAMMA, g)
    else:
        c1, c2, c3 = psi2_coefficients(g)
        _place(v, _PSI2_ONES, 1.0)
        _place(v, _PSI2_C1, c1)
        _place(v, _PSI2_C2, c2)
        _place(v, _PSI2_C3, c3)
    return StateVector.normalized(v, QUTRITS3)


@dataclass(frozen=True)
class SweepPoint:
    gamma: float
    b_ab: float
    b_bc: float
    b_ac: float
    angles: tuple[AngleSet, ...] | None = field(default=None, compare=False, repr=False)

    def violations(self, eps: float = TOL.cglmp_eps) -> int:
        return sum(v > 2.0 + eps for v in (self.b_ab, self.b_bc, self.b_ac))


def gamma_grid(start: float = 0.0, stop: float = 2.0, points: int = 41) -> list[float]:
    if points < 1:
        raise ValueError("points must be >= 1")
    return [float(g) for g in np.linspace(start, stop, points)]


def gamma_sweep(family_id: str, grid: Sequence[float], restarts: int = 24, seed: int = 0) -> list[SweepPoint]:
    if len(grid) == 0:
        raise ValueError("gamma grid is empty")
    out = []
    for i, g in enumerate(grid):
        reports = bell_reports(gamma_state(family_id, float(g)), restarts, seed, i)
        out.append(SweepPoint(float(g), *(r.value for r in reports), tuple(r.best_angles for r in reports)))
    return out


class QutritVerdict(enum.Enum):
    NO_SYMMETRIC_EXTENSION_CONJECTURAL = "NoSymmetricExtension_ConjecturalBellViolation"
    INCONCLUSIVE = "Inconclusive"


def nonextendibility_verdict_qutrit(rho, restarts: int = 24, seed: int = 0) -> QutritVerdict:
    """Violation of CGLMP rules out a symmetric extension, assuming CGLMP is monogamous."""
    if cglmp_max(rho, restarts=restarts, seed=seed).value > 2.0 + TOL.cglmp_eps:
        return QutritVerdict.NO_SYMMETRIC_EXTENSION_CONJECTURAL
    return QutritVerdict.INCONCLUSIVE


def embed_two_qutrit(pair_state: np.ndarray) -> StateVector:
    """|pair>_AB (x) |0>_C as a 3-qutrit state."""
    v = np.kron(np.asarray(pair_state, dtype=np.complex128), np.eye(3)[0])
    return StateVector.normalized(v, QUTRITS3)
