import numpy as np
import pytest
from itertools import product

from gaugeqed.dicke import (DickeParams, couplings, build_dicke_finiteN, mean_field,
                            classical_energy, hp_quadratic, symplectic_eigenvalues,
                            polariton_energies, ground_energy_thermo, order_parameter,
                            pi_expectation, gauge_invariant_polarization, critical_tau,
                            finite_n_gap, finite_n_gap_minimum, parity_operator,
                            PhaseError)


def test_params_validation():
    with pytest.raises(ValueError):
        DickeParams(omega_m=-1.0)
    with pytest.raises(ValueError):
        DickeParams(n_spins=32)
    p = DickeParams.at_tau(0.8, alpha=0.5)
    assert p.tau == pytest.approx(0.8)


def test_couplings_multipolar_structure():
    p = DickeParams.at_tau(0.9, alpha=1.0)
    w_a, c_a, g_a, gp_a = couplings(p)
    assert c_a == 0.0                      # (1 - alpha^2) factor
    assert gp_a == 0.0                     # (1 - alpha) factor
    assert w_a == pytest.approx(p.omega)   # no A^2 renormalization at alpha=1
    p0 = DickeParams.at_tau(0.9, alpha=0.0)
    w_a0, c_a0, g_a0, gp_a0 = couplings(p0)
    assert g_a0 == 0.0
    assert c_a0 > 0 and gp_a0 > 0 and w_a0 > p0.omega


def test_alpha_independent_combination():
    for tau, al in product((0.5, 1.0, 2.0), (0.0, 0.3, 0.7, 1.0)):
        p = DickeParams.at_tau(tau, alpha=al)
        w_a, c_a, g_a, _ = couplings(p)
        assert c_a + g_a ** 2 / w_a == pytest.approx(p.rho * p.d ** 2 / 2, rel=1e-12)


def test_finiteN_decoupled_limit():
    p = DickeParams(omega_m=1.0, omega=1.4, rho=1.0, d=1e-9, n_spins=4, n_boson=10)
    h = build_dicke_finiteN(p)
    w = np.linalg.eigvalsh(h.data)
    gaps = np.diff(w[:3])
    assert min(abs(gaps[0] - 1.0), abs(gaps[0] - 1.4)) < 1e-6


def test_finiteN_truncation_breaks_gauge_invariance():
    p1 = DickeParams.at_tau(1.2, alpha=1.0, n_spins=8, n_boson=24)
    p0 = DickeParams.at_tau(1.2, alpha=0.0, n_spins=8, n_boson=24)
    w1 = np.linalg.eigvalsh(build_dicke_finiteN(p1).data)[:6]
    w0 = np.linalg.eigvalsh(build_dicke_finiteN(p0).data)[:6]
    assert np.abs(np.diff(w1) - np.diff(w0)).max() > 1e-4


def test_mean_field_stationarity():
    for tau, al in product((0.4, 0.75, 0.95), (0.0, 0.5, 1.0)):
        p = DickeParams.at_tau(tau, alpha=al, omega=1.2)
        z0 = mean_field(p, "abnormal")
        eps = 1e-6
        for i in range(4):
            zp = z0.copy(); zp[i] += eps
            zm = z0.copy(); zm[i] -= eps
            grad = (classical_energy(p, zp) - classical_energy(p, zm)) / (2 * eps)
            assert abs(grad) < 1e-8


def test_abnormal_displacement_vanishes_at_critical():
    for eps in (1e-2, 1e-4, 1e-6):
        p = DickeParams.at_tau(1 - eps, alpha=0.5)
        z0 = mean_field(p, "abnormal")
        assert abs(z0[0]) == pytest.approx(np.sqrt(eps), rel=1e-9)


def test_abnormal_rejected_above_critical():
    p = DickeParams.at_tau(1.3, alpha=0.5)
    with pytest.raises(PhaseError):
        mean_field(p, "abnormal")
    with pytest.raises(PhaseError):
        hp_quadratic(p, "abnormal")


def test_hessian_matches_finite_differences():
    for tau, phase in ((1.4, "normal"), (0.63, "abnormal")):
        p = DickeParams.at_tau(tau, alpha=0.35, omega=1.2)
        m, z0, _ = hp_quadratic(p, phase)
        h = 1e-4
        fd = np.zeros((4, 4))
        for i, j in product(range(4), repeat=2):
            vals = []
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                z = z0.copy()
                z[i] += si * h
                z[j] += sj * h
                vals.append(classical_energy(p, z))
            fd[i, j] = (vals[0] - vals[1] - vals[2] + vals[3]) / (4 * h * h)
        assert np.abs(m - fd).max() < 1e-6


def test_symplectic_positivity_in_valid_phase():
    for tau in (0.5, 0.8, 1.2, 2.0):
        phase = "abnormal" if tau <= 1 else "normal"
        p = DickeParams.at_tau(tau, alpha=0.5)
        m, _, _ = hp_quadratic(p, phase)
        freqs = symplectic_eigenvalues(m)
        assert freqs is not None and freqs.min() >= 0
        # quadratic form positive semidefinite on the valid side
        assert np.linalg.eigvalsh(m).min() > -1e-12


def test_polariton_decoupled_limit():
    p = DickeParams(omega_m=1.0, omega=1.4, rho=1.0, d=1e-10)
    em, ep = polariton_energies(p, "normal")
    assert em == pytest.approx(1.0, abs=1e-6)
    assert ep == pytest.approx(1.4, abs=1e-6)


def test_lower_polariton_vanishes_at_critical_point():
    for al in (0.0, 0.5, 1.0):
        for eps in (1e-2, 1e-4):
            em_n, _ = polariton_energies(DickeParams.at_tau(1 + eps, alpha=al), "normal")
            em_a, _ = polariton_energies(DickeParams.at_tau(1 - eps, alpha=al), "abnormal")
            assert em_n < 3 * np.sqrt(eps)
            assert em_a < 3 * np.sqrt(eps)
            assert em_n > 0 and em_a > 0


def test_critical_tau_gauge_invariant():
    taus = []
    for al in (0.0, 0.5, 1.0):
        p = DickeParams.at_tau(1.5, alpha=al, omega=1.3)
        tc_n = critical_tau(p, phase="normal")
        tc_a = critical_tau(p, phase="abnormal")
        taus += [tc_n, tc_a]
    assert np.abs(np.array(taus) - 1.0).max() < 1e-10


def test_order_parameter_and_sum_rule():
    p = DickeParams.at_tau(0.6, alpha=1.0)
    assert order_parameter(p) == pytest.approx(-0.8 * p.rho * p.d, rel=1e-12)
    assert order_parameter(p) + pi_expectation(p) == 0.0
    assert order_parameter(DickeParams.at_tau(1.0, alpha=1.0)) == 0.0
    # coulomb partition: no macroscopic Pi
    assert pi_expectation(DickeParams.at_tau(0.6, alpha=0.0)) == 0.0
    assert gauge_invariant_polarization(p) == pytest.approx(-0.8 * p.rho * p.d, rel=1e-12)


def test_order_parameter_square_root_exponent():
    taus = np.linspace(0.9, 0.999, 12)
    p0 = DickeParams.at_tau(0.5, alpha=1.0)
    vals = [abs(order_parameter(DickeParams.at_tau(t, alpha=1.0))
                / (DickeParams.at_tau(t, alpha=1.0).rho * 1.0)) for t in taus]
    expo = np.polyfit(np.log(1 - np.array(taus) ** 2), np.log(vals), 1)[0]
    assert expo == pytest.approx(0.5, abs=1e-6)


def test_ground_energy_continuous_at_critical():
    for al in (0.0, 1.0):
        e_n, zp_n = ground_energy_thermo(DickeParams.at_tau(1 + 1e-10, alpha=al), "normal")
        e_a, zp_a = ground_energy_thermo(DickeParams.at_tau(1 - 1e-10, alpha=al), "abnormal")
        assert e_n == pytest.approx(e_a, abs=1e-9)
        assert zp_n == pytest.approx(zp_a, abs=1e-4)


def test_parity_operator_commutes():
    p = DickeParams.at_tau(0.8, alpha=1.0, n_spins=4, n_boson=12)
    h = build_dicke_finiteN(p).data
    par = parity_operator(p)
    assert np.abs(h @ par - par @ h).max() < 1e-10


def test_finite_n_gap_minimum_drifts_toward_critical():
    taus = np.linspace(0.5, 1.6, 23)
    mins = []
    for n in (4, 8):
        p = DickeParams(n_spins=n, n_boson=32, alpha=1.0)
        tmin, gaps = finite_n_gap_minimum(p, taus)
        mins.append(tmin)
        assert np.all(gaps > 0)
    assert abs(mins[1] - 1.0) < abs(mins[0] - 1.0)
