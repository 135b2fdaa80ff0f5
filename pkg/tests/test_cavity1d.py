import numpy as np
import pytest

from gaugeqed.cavity1d import (CavitySpec, coupling_constants, polaron_displacements,
                               polaron_unitary, independent_boson_hamiltonian,
                               pi_field_operator, p_t1_operator, field_map_excited,
                               field_map_ground, dirichlet_kernel, normalization_value)


@pytest.fixture(scope="module")
def spec():
    return CavitySpec(length=1.0, n_modes=50, d=1.0, volume=1.0)


@pytest.fixture(scope="module")
def small():
    return CavitySpec(length=1.0, n_modes=10, d=0.4, volume=1.0)


def test_mode_set(spec):
    assert len(spec.k_positive) == 50
    assert spec.k_positive[0] == pytest.approx(2 * np.pi)
    with pytest.raises(ValueError):
        CavitySpec(n_modes=5)


def test_coupling_constants(small):
    g = coupling_constants(small)
    assert g[0] == pytest.approx(small.d * np.sqrt(small.omega_positive[0] / 2))
    disp = polaron_displacements(small)
    assert np.allclose(disp, g / small.omega_positive)


def test_polaron_identity_at_zero_dipole():
    s = CavitySpec(length=1.0, n_modes=10, d=0.0)
    t = polaron_unitary(s, 5, modes=2)
    assert np.abs(t.data - np.eye(t.dim)).max() < 1e-12


def test_polaron_diagonalizes_two_modes(small):
    nf = 16
    h = independent_boson_hamiltonian(small, nf, modes=2)
    t = polaron_unitary(small, nf, modes=2)
    ht = t.data @ h.data @ t.data.conj().T
    u_sx = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    u = np.kron(u_sx, np.eye(nf * nf))
    hd = u.conj().T @ ht @ u
    idx = [s * nf * nf + n1 * nf + n2
           for s in range(2) for n1 in range(6) for n2 in range(6)]
    blk = hd[np.ix_(idx, idx)]
    assert np.abs(blk - np.diag(np.diag(blk))).max() < 1e-10
    # polaron ground energy: -sum g_k^2/w_k
    g = coupling_constants(small)[:2]
    w = small.omega_positive[:2]
    e0 = np.linalg.eigvalsh(h.data)[0]
    assert e0 == pytest.approx(-np.sum(g * g / w), abs=1e-10)


def test_polaron_shifts_pi_by_polarization(small):
    nf = 16
    x0 = 0.123
    t = polaron_unitary(small, nf, modes=2)
    pi_op = pi_field_operator(small, nf, x0, modes=2)
    pt1 = p_t1_operator(small, nf, x0, modes=2)
    lhs = t.data @ pi_op.data @ t.data.conj().T
    diff = lhs - (pi_op.data - pt1.data)
    idx = [s * nf * nf + n1 * nf + n2
           for s in range(2) for n1 in range(6) for n2 in range(6)]
    assert np.abs(diff[np.ix_(idx, idx)]).max() < 1e-10


def test_excited_map_bound_field_at_dipole(spec):
    # at t=0 the multipolar bare state carries no photons_1, so the normally
    # ordered map vanishes; the bound field then builds up around x=0 and
    # dominates the Coulomb-gauge value there at later times
    m1_t0 = field_map_excited(spec, 1.0, "OmOp", [0.0])
    assert np.abs(m1_t0.values).max() < 1e-18
    m1 = field_map_excited(spec, 1.0, "OmOp", [0.41])
    m0 = field_map_excited(spec, 0.0, "OmOp", [0.41])
    assert m1.values[0, 0] > 1e3 * m0.values[0, 0]
    assert m1.values[0, 0] > 100 * np.median(m1.values[0])


def test_excited_maps_agree_inside_lightcone(spec):
    ts = np.linspace(0.0, 1.0, 21)
    m0 = field_map_excited(spec, 0.0, "OmOp", ts)
    m1 = field_map_excited(spec, 1.0, "OmOp", ts)
    checked = 0
    for i, t in enumerate(ts):
        for j, x in enumerate(m0.x):
            if 0 < x < t < 1.0 - x:
                assert abs(m0.values[i, j] - m1.values[i, j]) < 1e-10
                checked += 1
    assert checked > 100


def test_propagating_peak_at_light_front(spec):
    for alpha in (0.0, 1.0):
        m = field_map_excited(spec, alpha, "OmOp", [0.3])
        interior = m.x[(m.x > 0.05) & (m.x < 0.95)]
        vals = m.values[0][(m.x > 0.05) & (m.x < 0.95)]
        x_peak = interior[np.argmax(vals)]
        assert min(abs(x_peak - 0.3), abs((1.0 - x_peak) - 0.3)) < 1.5 / (2 * spec.n_modes + 1)


def test_round_trip_periodicity(spec):
    m0 = field_map_excited(spec, 1.0, "O2", [0.0])
    mL = field_map_excited(spec, 1.0, "O2", [spec.length])
    assert np.abs(m0.values - mL.values).max() < 1e-18


def test_ground_map_coulomb_zero_and_alpha_squared(spec):
    g0 = field_map_ground(spec, 0.0, [0.0, 0.5])
    assert np.abs(g0.values).max() == 0.0
    g_half = field_map_ground(spec, 0.5, [0.0])
    g_one = field_map_ground(spec, 1.0, [0.0])
    assert np.abs(4 * g_half.values - g_one.values).max() < 1e-12 * g_one.values.max()
    # time independence
    g_t = field_map_ground(spec, 1.0, [0.0, 0.3, 0.9])
    assert np.abs(np.diff(g_t.values, axis=0)).max() == 0.0


def test_ground_map_omop_quarter(spec):
    o2 = field_map_ground(spec, 0.7, [0.0], observable="O2")
    om = field_map_ground(spec, 0.7, [0.0], observable="OmOp")
    assert np.abs(o2.values - 4 * om.values).max() < 1e-12 * o2.values.max()


def test_dirichlet_kernel_zeros_on_grid(spec):
    xg = spec.grid_x()
    vals = dirichlet_kernel(spec, xg[1:])      # exclude the dipole site
    assert np.abs(vals).max() < 1e-9
    assert dirichlet_kernel(spec, 0.0) == pytest.approx(2 * spec.n_modes + 1)


def test_ground_map_dirichlet_decay(spec):
    # off-grid sampling shows the kernel side lobes shrinking with N
    x_probe = np.array([0.213])
    small_n = CavitySpec(length=1.0, n_modes=50)
    big_n = CavitySpec(length=1.0, n_modes=200)
    v_small = field_map_ground(small_n, 1.0, [0.0], x_vals=x_probe).values[0, 0]
    v_big = field_map_ground(big_n, 1.0, [0.0], x_vals=x_probe).values[0, 0]
    # the map is [D_N(x) - 1]^2; the Dirichlet kernel obeys |D_N| <= 1/|sin(pi x/L)|
    bound = (1.0 / abs(np.sin(np.pi * 0.213)) + 1.0) ** 2 * 1.01
    assert v_small < bound and v_big < bound
    # far from the dipole the lobes stay O(1) while the peak grows as (2N+1)^2
    assert v_big < 1e-3 * (2 * 200 + 1) ** 2


def test_operator_ordering_identity(spec):
    # <O^2> - E_vac = 2 <O^- O^+> + 2 Re(s^2) with s the coherent amplitude
    ts = [0.13]
    m2 = field_map_excited(spec, 0.6, "O2", ts)
    mo = field_map_excited(spec, 0.6, "OmOp", ts)
    ks = spec.k_positive
    ws = spec.omega_positive
    dv = spec.d / spec.volume
    for j, x in enumerate(m2.x[:7]):
        s = dv * ((1 - 0.6) / 2 + np.sum((np.exp(1j * ws * ts[0]) - 0.6) * np.cos(ks * x)))
        lhs = m2.values[0, j]
        rhs = 2 * mo.values[0, j] + 2 * np.real(s * s)
        assert lhs == pytest.approx(rhs, abs=1e-9 * max(abs(lhs), 1.0))


def test_normalization_value(spec):
    # pulse revisits the dipole at t = L: normalization is the map maximum
    val = normalization_value(spec, 1.0)
    m = field_map_excited(spec, 1.0, "OmOp", [spec.length])
    assert val == pytest.approx(m.values[0].max(), rel=1e-12)
