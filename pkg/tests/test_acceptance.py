"""Acceptance criteria 1-11.

Each test prints one PASS/FAIL line; the lines are repeated in the
terminal summary. Criteria 8, 9 and 11 run the desk-scale scan and the
two gamma sweeps, which together take several minutes on one core.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from bellsym import io
from bellsym.cglmp import AngleSet, cglmp_max, outcome_distribution, psi_gamma
from bellsym.chsh import chen_criterion, chsh_direct, chsh_value
from bellsym.dicke import brute_force_rdm, eigenidentity_check, random_dicke_state, rdm_from_dicke, theorem1_check
from bellsym.linalg import DensityMatrix, StateVector, determinant, outer
from bellsym.monogamy import gamma_grid, gamma_state, gamma_sweep, monogamy_scan, rdm_triple, random_3qutrit
from bellsym.optimize import CGLMP, CHSH, nelder_mead
from bellsym.sampling import random_mixed_state, random_pure_state

from conftest import ACCEPTANCE_LINES, bell_phi_plus

SCAN_STATES = 1000
SCAN_SEED = 7
RESTARTS = 24
SWEEP_SEED = 0
TARGET = 2.9149


def criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def qutrit_pair(amplitudes) -> DensityMatrix:
    return outer(StateVector(amplitudes, (3, 3)))


def distribution_errors(rho, angles: AngleSet) -> float:
    d = outcome_distribution(rho, angles)
    return max(d.normalization_error(), d.signalling_error(), d.range_error())


@pytest.fixture(scope="module")
def compile_seconds():
    """Compile the optimizer kernels once so runtime limits measure the computation."""
    t0 = time.perf_counter()
    nelder_mead(CHSH, np.zeros(8), np.eye(4) / 4, maxfev=20)
    nelder_mead(CGLMP, np.zeros(12), np.eye(9, 1) / 1.0, maxfev=20)
    return time.perf_counter() - t0


@pytest.fixture(scope="module")
def optimal_report(compile_seconds):
    t0 = time.perf_counter()
    rho = qutrit_pair(psi_gamma(0.7923))
    rep = cglmp_max(rho, restarts=RESTARTS, seed=5)
    return rho, rep, time.perf_counter() - t0


@pytest.fixture(scope="module")
def product_reports():
    rng = np.random.default_rng(77)
    out = []
    for i in range(50):
        a, b = random_pure_state((3,), rng), random_pure_state((3,), rng)
        rho = qutrit_pair(np.kron(a.amplitudes, b.amplitudes))
        out.append((rho, cglmp_max(rho, restarts=RESTARTS, seed=i)))
    return out


@pytest.fixture(scope="module")
def scan():
    t0 = time.perf_counter()
    records, summary = monogamy_scan(SCAN_STATES, seed=SCAN_SEED, restarts=RESTARTS)
    return records, summary, time.perf_counter() - t0


@pytest.fixture(scope="module")
def sweeps():
    grid = gamma_grid(0.0, 2.0, 41)
    return {fam: gamma_sweep(fam, grid, restarts=RESTARTS, seed=SWEEP_SEED) for fam in ("psi1", "psi2")}


def test_criterion_01_tsirelson(compile_seconds):
    t0 = time.perf_counter()
    rho = bell_phi_plus()
    closed = chsh_value(rho).value
    direct = chsh_direct(rho, restarts=24, seed=0)
    elapsed = time.perf_counter() - t0
    ok = abs(closed - 2 * math.sqrt(2)) <= 1e-9 and abs(direct - closed) <= 1e-4 and elapsed < 1.0
    criterion(1, "Tsirelson value", ok, f"closed={closed:.12f} direct={direct:.12f} t={elapsed:.2f}s, kernel compile {compile_seconds:.1f}s")


def test_criterion_02_closed_form_vs_direct(compile_seconds):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst_low, worst_high = 0.0, 0.0
    for i in range(200):
        rho = random_mixed_state((2, 2), rng, ancilla_dim=1 + i % 4)
        closed = chsh_value(rho).value
        direct = chsh_direct(rho, restarts=16, seed=i)
        worst_low = max(worst_low, closed - direct)
        worst_high = max(worst_high, direct - closed)
    elapsed = time.perf_counter() - t0
    ok = worst_low <= 1e-3 and worst_high <= 1e-6 and elapsed < 60
    criterion(2, "closed form vs direct optimization, 200 states", ok,
              f"max shortfall={worst_low:.2e} max excess={worst_high:.2e} t={elapsed:.1f}s")


def test_criterion_03_symmetric_marginals_local():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(3, 9):
        rng = np.random.default_rng([3, n])
        for _ in range(500):
            worst = max(worst, theorem1_check(random_dicke_state(n, rng)).chsh)
    rdm_err = 0.0
    for n in (3, 4, 5):
        rng = np.random.default_rng([33, n])
        for _ in range(500):
            psi = random_dicke_state(n, rng)
            rdm_err = max(rdm_err, np.max(np.abs(rdm_from_dicke(psi).matrix() - brute_force_rdm(psi).matrix)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 2 + 1e-9 and rdm_err <= 1e-10 and elapsed < 120
    criterion(3, "symmetric-state marginals satisfy CHSH", ok,
              f"max chsh={worst:.10f} rdm err={rdm_err:.1e} t={elapsed:.1f}s")


def test_criterion_04_proof_chain_identities():
    rng = np.random.default_rng(4)
    id_err = sum_err = purity_gap = det_max = 0.0
    for i in range(200):
        psi = random_dicke_state(3 + i % 6, rng)
        chk = eigenidentity_check(psi)
        id_err = max(id_err, abs(chk.lhs - chk.rhs))
        sum_err = max(sum_err, abs(chk.eigenvalue_sum - 1))
        purity_gap = max(purity_gap, chk.pair_purity - chk.single_qubit_purity)
        det_max = max(det_max, determinant(rdm_from_dicke(psi).matrix()).real)
    ok = id_err <= 1e-10 and sum_err <= 1e-10 and purity_gap <= 1e-12 and det_max <= 1e-10
    criterion(4, "eigenvalue identities, purity ordering, det", ok,
              f"identity={id_err:.1e} sum={sum_err:.1e} purity gap={purity_gap:.1e} det={det_max:.1e}")


def test_criterion_05_violation_implies_not_extendible():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    violators = exceptions = 0
    for i in range(2000):
        rho = random_mixed_state((2, 2), rng, ancilla_dim=1 + i % 4)
        if chsh_value(rho).value > 2 + 1e-9:
            violators += 1
            exceptions += chen_criterion(rho).extendible
    elapsed = time.perf_counter() - t0
    ok = exceptions == 0 and violators > 0 and elapsed < 60
    criterion(5, "CHSH violation implies no symmetric extension", ok,
              f"violators={violators} exceptions={exceptions} t={elapsed:.1f}s")


def test_criterion_06_cglmp_maximum(optimal_report):
    _, rep, elapsed = optimal_report
    ok = abs(rep.value - TARGET) <= 2e-3 and elapsed < 30
    criterion(6, "CGLMP maximal value at gamma=0.7923", ok, f"value={rep.value:.10f} t={elapsed:.1f}s")


def test_criterion_07_lhv_bound(product_reports):
    worst = max(rep.value for _, rep in product_reports)
    criterion(7, "LHV bound on 50 product states", worst <= 2 + 1e-6, f"max={worst:.10f}")


def test_criterion_08_monogamy_scan(scan):
    records, summary, elapsed = scan
    ok = (
        summary.n_states == SCAN_STATES
        and summary.double_violations == 0
        and summary.max_second_largest <= 2 + 1e-6
        and elapsed < 1800
    )
    single = sum(r.violations == 1 for r in records)
    criterion(8, f"monogamy scan, {SCAN_STATES} states, seed {SCAN_SEED}", ok,
              f"double={summary.double_violations} single={single} "
              f"max second={summary.max_second_largest:.6f} t={elapsed:.0f}s")


def test_criterion_09_gamma_sweeps(sweeps):
    details, ok = [], True
    for fam, pts in sweeps.items():
        most = max(p.violations() for p in pts)
        crossing = [name for name, k in (("AB", 0), ("BC", 1), ("AC", 2))
                    if any((p.b_ab, p.b_bc, p.b_ac)[k] > 2 + 1e-6 for p in pts)]
        ok &= len(pts) == 41 and most <= 1
        details.append(f"{fam}: max violations={most} violating={'/'.join(crossing) or 'none'}")
    criterion(9, "gamma sweeps have at most one violating marginal", ok, "; ".join(details))


def test_criterion_10_distributions(optimal_report, product_reports, scan, sweeps):
    rho, rep, _ = optimal_report
    worst = distribution_errors(rho, rep.best_angles)
    count = 1
    for rho, rep in product_reports:
        worst = max(worst, distribution_errors(rho, rep.best_angles))
        count += 1
    for rec in scan[0]:
        for rho, angles in zip(rdm_triple(random_3qutrit(rec.seed, rec.index)), rec.angles):
            worst = max(worst, distribution_errors(rho, angles))
            count += 1
    for fam, pts in sweeps.items():
        for p in pts:
            for rho, angles in zip(rdm_triple(gamma_state(fam, p.gamma)), p.angles):
                worst = max(worst, distribution_errors(rho, angles))
                count += 1
    criterion(10, "no-signalling and normalization", worst <= 1e-10,
              f"{count} distributions, worst error={worst:.1e}")


def test_criterion_11_determinism(scan, sweeps, tmp_path):
    same = []
    lib_scan = io.emit_csv(scan[0], tmp_path / "scan_lib.csv")
    cli_scan = tmp_path / "scan_cli.csv"
    subprocess.run(
        [sys.executable, "-m", "bellsym", "scan", "monogamy", "--states", str(SCAN_STATES), "--seed", str(SCAN_SEED),
         "--restarts", str(RESTARTS), "--out", str(cli_scan)],
        check=True, capture_output=True,
    )
    same.append(lib_scan.read_bytes() == cli_scan.read_bytes())
    for fam, pts in sweeps.items():
        lib = io.emit_csv(pts, tmp_path / f"{fam}_lib.csv")
        cli = tmp_path / f"{fam}_cli.csv"
        subprocess.run(
            [sys.executable, "-m", "bellsym", "scan", "gamma", "--family", fam, "--from", "0", "--to", "2",
             "--points", "41", "--restarts", str(RESTARTS), "--seed", str(SWEEP_SEED), "--out", str(cli)],
            check=True, capture_output=True,
        )
        same.append(lib.read_bytes() == cli.read_bytes())
    criterion(11, "rerun CSVs are byte-identical", all(same),
              f"scan={same[0]} psi1={same[1]} psi2={same[2]}")
