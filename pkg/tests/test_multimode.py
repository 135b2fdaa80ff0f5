import numpy as np
import pytest
from scipy import integrate

from gaugeqed import opalg
from gaugeqed.material import MaterialModel, solve_material, calibrate_anharmonicity
from gaugeqed.gauge import alpha_jc
from gaugeqed.multimode import (ContinuumSpec, ModeSet, u_plus, u_pm_singlemode,
                                detector_population, time_averaged_rate,
                                renormalized_frequencies, level_shift, golden_rule,
                                build_master_equation, master_equation_steady,
                                local_qubit_cavity_steady)

JC = lambda w: alpha_jc(1.0, w)


@pytest.fixture(scope="module")
def dw3():
    model = calibrate_anharmonicity("double_well", 3.0, target_levels=14)
    return solve_material(model, _check_convergence=False)


def test_u_plus_special_cases():
    assert u_plus(0.0, 2.0) ** 2 == pytest.approx(0.5)        # coulomb: w_m/w
    assert u_plus(1.0, 2.0) ** 2 == pytest.approx(2.0)        # multipolar: w/w_m
    assert u_plus(1.0, 2.0) == pytest.approx(-np.sqrt(2.0))   # direct evaluation
    for w in (0.1, 1.0, 3.7, 42.0):
        assert u_plus(JC, w) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        u_plus(0.5, -1.0)


def test_u_pm_singlemode_form():
    up, um = u_pm_singlemode(0.5, 0.4, 2.0)
    pref = 0.4 / 2 * np.sqrt(2.0)
    assert up == pytest.approx(pref * (0.5 - 2.0 * 0.5))
    assert um == pytest.approx(pref * (0.5 + 2.0 * 0.5))
    up_jc, _ = u_pm_singlemode(alpha_jc(1.0, 2.0), 0.7, 2.0)
    assert up_jc == pytest.approx(0.0, abs=1e-15)


def test_detector_population_trivial():
    spec = ContinuumSpec(omega_max=50.0)
    assert detector_population(spec, 1.0, 0.0) == 0.0
    assert detector_population(spec, JC, 17.3) == pytest.approx(0.0, abs=1e-20)


def test_detector_population_dual_rule_fixture():
    # two independent quadratures of the same integrand
    spec = ContinuumSpec(omega_max=100.0)
    t = 50.0
    val = detector_population(spec, 1.0, t)

    def integrand(w):
        return (w * u_plus(1.0, w) * np.sin((1 + w) * t) / (1 + w)) ** 2

    chunks = np.linspace(0, 100, 501)
    indep = sum(integrate.quad(integrand, a, b, limit=200)[0]
                for a, b in zip(chunks[:-1], chunks[1:]))
    indep *= 2 * spec.gamma / np.pi
    assert val == pytest.approx(indep, rel=1e-6)


def test_rate_scalings_fig8():
    t_avg = 1e4
    cutoffs = np.array([1e3, 1e4, 1e5])
    r_mult = [time_averaged_rate(ContinuumSpec(omega_max=m), 1.0, t_avg) for m in cutoffs]
    r_coul = [time_averaged_rate(ContinuumSpec(omega_max=m), 0.0, t_avg) for m in cutoffs]
    s_mult = np.polyfit(np.log(cutoffs), np.log(r_mult), 1)[0]
    s_coul = np.polyfit(np.log(cutoffs), np.log(r_coul), 1)[0]
    assert s_mult == pytest.approx(2.0, abs=0.1)
    assert s_coul < 0.15
    assert time_averaged_rate(ContinuumSpec(omega_max=1e3), JC, t_avg) == \
        pytest.approx(0.0, abs=1e-18)


def test_rate_requires_long_average():
    with pytest.raises(ValueError):
        time_averaged_rate(ContinuumSpec(omega_max=100.0), 1.0, 10.0)


def test_renormalized_frequencies_limits():
    spec = ContinuumSpec(omega_max=50.0)
    modes = ModeSet(omegas=np.array([0.5, 1.0, 2.0]), volume=3.0)
    wm0, wmat0, theta0 = renormalized_frequencies(spec, 0.0, modes)
    assert wm0 == pytest.approx(spec.omega_m)          # alpha=0: no material shift
    assert np.abs(theta0).max() > 0
    wm1, wmat1, theta1 = renormalized_frequencies(spec, 1.0, modes)
    assert np.abs(theta1).max() == pytest.approx(0.0, abs=1e-16)  # (1-alpha) factor
    assert wm1 > spec.omega_m
    assert np.abs(theta0 - theta0.T).max() < 1e-16


def test_renormalized_theta_hand_expansion():
    # symmetric 3-mode case against the explicit formula
    spec = ContinuumSpec(omega_max=50.0)
    w = np.array([0.5, 1.0, 2.0])
    modes = ModeSet(omegas=w, volume=2.0)
    alpha = 0.25
    q2 = 6 * np.pi * spec.gamma          # q^2/m at m=1
    _, _, theta = renormalized_frequencies(spec, alpha, modes)
    for k in range(3):
        for j in range(3):
            expect = -q2 / (2 * 2.0) * (1 - alpha) ** 2 \
                / (np.sqrt(w[k] * w[j]) * (w[k] + w[j]))
            assert theta[k, j] == pytest.approx(expect, rel=1e-12)


def test_level_shift_zero_charge(dw3):
    spec = ContinuumSpec(omega_max=30.0)
    val, excl = level_shift(dw3, spec, 0.7, 0, q=0.0)
    assert val == 0.0 and not excl


def test_level_shift_two_level_hand_oracle():
    # 2-level material at alpha=1: the ground-level summand reduces by hand to
    # w + w^2/(w_01 - w) = w - w^2/(w_m + w), with w_01 = -w_m
    harm = solve_material(MaterialModel("harmonic", 1.0, target_levels=6))
    spec = ContinuumSpec(omega_max=20.0)
    n_omega = 4000
    val, _ = level_shift(harm, spec, 1.0, 0, n_omega=n_omega, m_levels=2)
    x2 = harm.x01 ** 2
    wm = 1.0
    w_grid = np.linspace(0.0, spec.omega_max, n_omega + 1)[1:]
    dw = w_grid[1] - w_grid[0]
    weights = np.full_like(w_grid, dw)
    weights[-1] *= 0.5
    term = w_grid - w_grid ** 2 / (wm + w_grid)
    expect = np.sum(weights * w_grid * term) * x2 / (6 * np.pi ** 2)
    assert val == pytest.approx(expect, rel=1e-12)


def test_level_shift_alpha_spread_shrinks(dw3):
    spec = ContinuumSpec(omega_max=30.0)
    spreads = []
    for m in (3, 6, 12):
        vals = [level_shift(dw3, spec, a, 0, m_levels=m)[0] for a in (0.0, 0.5, 1.0)]
        spreads.append(max(vals) - min(vals))
    assert spreads[2] < spreads[1] < spreads[0]


def test_golden_rule_values(dw3):
    harm = solve_material(MaterialModel("harmonic", 1.0, target_levels=8))
    # parity: x_20 = 0 -> rate 0 would divide out; only n->n-1 nonzero
    assert abs(harm.x[2, 0]) < 1e-10
    g10 = golden_rule(harm, 1, 0)
    assert g10 == pytest.approx(1.0 ** 3 * harm.x01 ** 2 / (3 * np.pi), rel=1e-10)
    with pytest.raises(ValueError):
        golden_rule(harm, 0, 1)


def test_master_equation_steady_is_ground(dw3):
    rho = master_equation_steady(dw3, 4)
    expect = np.zeros((4, 4))
    expect[0, 0] = 1.0
    assert np.abs(rho.matrix - expect).max() < 1e-9


def test_master_equation_monotone_decay(dw3):
    h, jumps = build_master_equation(dw3, 4)
    start = np.zeros((4, 4), dtype=complex)
    start[3, 3] = 1.0
    rho0 = opalg.DensityMatrix((4,), start)
    t_grid = np.linspace(0.0, 400.0, 30)
    states = opalg.lindblad_evolve(h, jumps, rho0, t_grid)
    top = np.array([s.matrix[3, 3].real for s in states])
    assert np.all(np.diff(top) <= 1e-12)
    assert states[-1].matrix[0, 0].real > 0.98


def test_local_master_equation_steady():
    rho = local_qubit_cavity_steady(omega_q=1.0, omega_c=1.2, g=0.15,
                                    gamma=0.08, kappa=0.05, n_fock=8)
    expect = np.zeros((16, 16))
    expect[0, 0] = 1.0
    assert np.abs(rho.matrix - expect).max() < 1e-9
