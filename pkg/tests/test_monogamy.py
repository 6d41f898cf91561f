import math

import numpy as np
import pytest

from bellsym.cglmp import MAX_CGLMP_VALUE, OPTIMAL_GAMMA, psi_gamma
from bellsym.linalg import DensityMatrix, StateVector, hermitian_eigenvalues, outer, partial_trace
from bellsym.monogamy import (
    GammaFamily,
    QutritVerdict,
    ScanRecord,
    derive_seed,
    embed_two_qutrit,
    gamma_grid,
    gamma_state,
    gamma_sweep,
    iter_monogamy_scan,
    monogamy_scan,
    nonextendibility_verdict_qutrit,
    psi2_coefficients,
    random_3qutrit,
    rdm_triple,
    scan_state,
    summarize,
)


def test_random_state_deterministic():
    a, b = random_3qutrit(42, 0), random_3qutrit(42, 0)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert not np.array_equal(a.amplitudes, random_3qutrit(42, 1).amplitudes)
    assert np.linalg.norm(a.amplitudes) == pytest.approx(1, abs=1e-12)


def test_uniform_sphere_moment():
    # E|a_0|^2 = 1/27; |a_0|^2 ~ Beta(1, 26) has variance 26 / (27^2 * 28)
    x = np.array([abs(random_3qutrit(3, i).amplitudes[0]) ** 2 for i in range(10_000)])
    se = math.sqrt(26 / (27**2 * 28) / x.size)
    assert abs(x.mean() - 1 / 27) < 3 * se


def test_derive_seed():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)
    assert 0 <= derive_seed(5) < 2**32


def test_rdm_triple_examples():
    v = np.zeros(27, dtype=complex)
    v[0] = 1
    for rho in rdm_triple(StateVector(v, (3, 3, 3))):
        assert np.allclose(rho.matrix, np.diag(np.eye(9)[0]))

    ghz = np.zeros(27, dtype=complex)
    ghz[[0, 13, 26]] = 1 / math.sqrt(3)
    expected = np.zeros((9, 9))
    expected[[0, 4, 8], [0, 4, 8]] = 1 / 3
    for rho in rdm_triple(StateVector(ghz, (3, 3, 3))):
        assert np.allclose(rho.matrix, expected, atol=1e-15)


def test_rdm_triple_matches_partial_trace_and_purification():
    for i in range(20):
        psi = random_3qutrit(9, i)
        full = outer(psi)
        for rho, keep, other in zip(rdm_triple(psi), ((0, 1), (1, 2), (0, 2)), (2, 0, 1)):
            assert np.allclose(rho.matrix, partial_trace(full, keep).matrix, atol=1e-14)
            single = partial_trace(full, [other])
            assert rho.purity() == pytest.approx(single.purity(), abs=1e-12)
            big = hermitian_eigenvalues(rho.matrix)[-3:]
            assert np.allclose(big, hermitian_eigenvalues(single.matrix), atol=1e-10)


def test_rdm_triple_rejects_qubits():
    with pytest.raises(ValueError):
        rdm_triple(StateVector(np.eye(8)[0], (2, 2, 2)))


def test_record_flags():
    r = ScanRecord.from_values(0, 1, [2.5, 2.0000005, 1.0])
    assert r.violations == 1 and not r.double_violation
    r = ScanRecord.from_values(0, 1, [2.5, 2.1, 1.0])
    assert r.violations == 2 and r.double_violation
    assert r.second_largest == 2.1
    s = summarize([r, ScanRecord.from_values(1, 1, [0, 0, 0])])
    assert (s.n_states, s.max_second_largest, s.double_violations) == (2, 2.1, 1)


def test_embedded_optimal_state():
    psi = embed_two_qutrit(psi_gamma(OPTIMAL_GAMMA))
    rec = scan_state(psi, seed=5, index=0, restarts=24)
    assert rec.b_ab == pytest.approx(MAX_CGLMP_VALUE, abs=2e-3)
    assert rec.b_bc <= 2 + 1e-6 and rec.b_ac <= 2 + 1e-6
    assert rec.violations == 1


def test_product_state_scan():
    rec = scan_state(embed_two_qutrit(np.eye(9)[0]), seed=0, index=0, restarts=4)
    assert rec.values == pytest.approx((0, 0, 0), abs=1e-8)
    assert rec.violations == 0


def test_small_scan_deterministic_and_worker_independent():
    a, summary = monogamy_scan(4, seed=1, restarts=4, workers=1)
    b = list(iter_monogamy_scan(4, seed=1, restarts=4, workers=2))
    assert a == b
    assert [r.index for r in a] == [0, 1, 2, 3]
    assert summary.double_violations == 0
    with pytest.raises(ValueError):
        monogamy_scan(0, seed=1)


def test_psi1_at_zero():
    amp = gamma_state("psi1", 0.0).amplitudes
    ones = [9 * int(k[0]) + 3 * int(k[1]) + int(k[2]) for k in ("000", "001", "002", "110", "111", "112", "221", "222")]
    expected = np.zeros(27)
    expected[ones] = 1 / math.sqrt(8)
    assert np.allclose(amp, expected, atol=1e-15)


def test_psi1_literal_norm():
    # |112> carries 1 + gamma: seven unit kets, five gamma kets, so norm^2 = 8 + 2g + 6g^2
    g = 0.6
    amp = gamma_state("psi1", g).amplitudes
    scale = math.sqrt(8 + 2 * g + 6 * g * g)
    assert amp[9 + 3 + 2] * scale == pytest.approx(1 + g)
    assert amp[3] * scale == pytest.approx(g)


def test_psi1_real_nonnegative():
    for g in gamma_grid():
        amp = gamma_state("psi1", g).amplitudes
        assert np.all(amp.imag == 0) and np.all(amp.real >= 0)
        assert np.linalg.norm(amp) == pytest.approx(1, abs=1e-12)


def test_psi2_coefficients():
    assert psi2_coefficients(1.0)[2] == 0.0
    assert psi2_coefficients(1.4)[1] == 0.0
    assert psi2_coefficients(0.0) == pytest.approx((100.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        GammaFamily("psi2", -0.001)
    with pytest.raises(ValueError):
        GammaFamily("psi3", 1.0)
    with pytest.raises(ValueError):
        GammaFamily("psi1", math.inf)


def test_gamma_grid():
    g = gamma_grid()
    assert len(g) == 41 and g[0] == 0 and g[-1] == 2 and g[16] == pytest.approx(0.8)


def test_short_sweep():
    pts = gamma_sweep("psi1", [0.0, 1.0], restarts=6, seed=0)
    assert [p.gamma for p in pts] == [0.0, 1.0]
    assert all(p.violations() <= 1 for p in pts)
    with pytest.raises(ValueError):
        gamma_sweep("psi1", [])


def test_qutrit_verdicts():
    rho = outer(StateVector(psi_gamma(OPTIMAL_GAMMA), (3, 3)))
    assert nonextendibility_verdict_qutrit(rho) is QutritVerdict.NO_SYMMETRIC_EXTENSION_CONJECTURAL
    assert nonextendibility_verdict_qutrit(DensityMatrix(np.eye(9) / 9, (3, 3)), restarts=4) is QutritVerdict.INCONCLUSIVE
    prod = DensityMatrix(np.diag(np.eye(9)[0]), (3, 3))
    assert nonextendibility_verdict_qutrit(prod, restarts=4) is QutritVerdict.INCONCLUSIVE
