"""Arbitrary-gauge Dicke model: finite-N Hamiltonian, thermodynamic-limit
quadratic forms in both phases, polariton energies and order parameters.

Couplings follow the collective-operator form

  H = w_m J^z + w_a (c^dag c + 1/2) - (C_a/N)(J^+ + J^-)^2
      - i (g'_a/sqrt(N)) (J^+ - J^-)(c^dag + c)
      + i (g_a /sqrt(N)) (J^+ + J^-)(c^dag - c) + const

with w_a^2 = w^2 + (1-a)^2 w_m^2/tau,  C_a = rho d^2 (1-a^2)/2,
g'_a = (1-a) w_m d sqrt(rho/(2 w_a)),  g_a = a d sqrt(rho w_a/2), and
tau = w_m/(2 rho d^2).  The charge/mass constant entering w_a is expressed
through the two-level oscillator-strength identity e^2/m = 2 w_m d^2.

The combination C_a + g_a^2/w_a = rho d^2/2 is alpha-independent, which is
what makes the critical point tau = 1 gauge-invariant.

Polariton energies come from the 4x4 symplectic (Bogoliubov) problem of the
Hessian of the classical energy surface; the abnormal-phase Hessian entries
below are closed forms obtained by differentiating the Holstein-Primakoff
classical energy at the displaced stationary point beta^2 = (1-tau)/2.
"""

from dataclasses import dataclass
import numpy as np

from .opalg import Operator


class PhaseError(Exception):
    """Requested phase is invalid at this tau (complex lower polariton)."""

    def __init__(self, tau, detail=""):
        self.tau = tau
        super().__init__(f"phase invalid at tau={tau}: {detail}")


@dataclass(frozen=True)
class DickeParams:
    omega_m: float = 1.0
    omega: float = 1.0
    rho: float = 1.0          # dipole density N/v
    d: float = 1.0            # dipole moment
    alpha: float = 1.0
    n_spins: int = 8          # finite-N runs only
    n_boson: int = 30

    def __post_init__(self):
        if min(self.omega_m, self.omega, self.rho, self.d) <= 0:
            raise ValueError("all Dicke parameters must be positive")
        if self.n_spins > 16 or self.n_boson > 60:
            raise ValueError("finite-N builder is desk-scale: N <= 16, boson dim <= 60")

    @property
    def tau(self):
        return self.omega_m / (2 * self.rho * self.d ** 2)

    @classmethod
    def at_tau(cls, tau, alpha=1.0, omega_m=1.0, omega=1.0, d=1.0, **kw):
        rho = omega_m / (2 * tau * d ** 2)
        return cls(omega_m=omega_m, omega=omega, rho=rho, d=d, alpha=alpha, **kw)


def couplings(params):
    """(w_alpha, C_alpha, g_alpha, g'_alpha) for the collective Hamiltonian."""
    a = params.alpha
    rd2 = params.rho * params.d ** 2
    w_a2 = params.omega ** 2 + 2 * params.omega_m * rd2 * (1 - a) ** 2
    w_a = np.sqrt(w_a2)
    c_a = rd2 * (1 - a ** 2) / 2.0
    g_a = a * params.d * np.sqrt(params.rho * w_a / 2.0)
    gp_a = (1 - a) * params.omega_m * params.d * np.sqrt(params.rho / (2 * w_a))
    return w_a, c_a, g_a, gp_a


def build_dicke_finiteN(params):
    """Collective-spin (Dicke) sector Hamiltonian on spin-N/2 (x) Fock."""
    n = params.n_spins
    nb = params.n_boson
    j = n / 2.0
    m = np.arange(-j, j + 1)
    jz = np.diag(m)
    jp = np.diag(np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1)), -1)  # raising in ascending-m basis
    jm = jp.T
    c = np.diag(np.sqrt(np.arange(1, nb, dtype=float)), 1)
    w_a, c_a, g_a, gp_a = couplings(params)
    eye_s = np.eye(n + 1)
    eye_b = np.eye(nb)
    jx2 = (jp + jm) @ (jp + jm)
    h = (params.omega_m * np.kron(jz, eye_b)
         + w_a * np.kron(eye_s, c.T @ c + 0.5 * eye_b)
         - (c_a / n) * np.kron(jx2, eye_b)
         - 1j * (gp_a / np.sqrt(n)) * np.kron(jp - jm, c.T + c)
         + 1j * (g_a / np.sqrt(n)) * np.kron(jp + jm, c.T - c))
    return Operator((n + 1, nb), h.astype(complex))


def boson_tail(params, state):
    """Occupation weight in the top boson level of a spin (x) Fock vector."""
    nb = params.n_boson
    amps = state.reshape(params.n_spins + 1, nb)
    return float(np.sum(np.abs(amps[:, -1]) ** 2))


def mean_field(params, phase):
    """Classical displacements (x1, p1, x2, p2) of the requested phase.

    Conventions: beta = (x1 + i p1)/sqrt(2) for the HP boson, gamma likewise
    for the cavity; the abnormal branch takes x1 < 0 so the transverse
    polarization matches -alpha rho d sqrt(1-tau^2).
    """
    tau = params.tau
    if phase == "normal":
        return np.zeros(4)
    if phase != "abnormal":
        raise ValueError(f"unknown phase {phase!r}")
    if tau > 1:
        raise PhaseError(tau, "abnormal phase requires tau <= 1 "
                              "(lower polariton E^a_- is real only there)")
    w_a, c_a, g_a, gp_a = couplings(params)
    x1 = -np.sqrt(1 - tau)
    k0 = np.sqrt((1 + tau) / 2.0)
    p2 = -2 * g_a * k0 * x1 / w_a
    return np.array([x1, 0.0, 0.0, p2])


def classical_energy(params, z):
    """Classical HP energy per spin, coordinates z = (x1, p1, x2, p2)."""
    w_a, c_a, g_a, gp_a = couplings(params)
    x1, p1, x2, p2 = z
    k2 = 1 - (x1 ** 2 + p1 ** 2) / 2.0
    if k2 < 0:
        raise ValueError("HP coordinates outside the physical disk")
    k = np.sqrt(k2)
    return (params.omega_m * (x1 ** 2 + p1 ** 2) / 2 - params.omega_m / 2
            + w_a * (x2 ** 2 + p2 ** 2) / 2
            - 2 * c_a * k2 * x1 ** 2 - 2 * gp_a * k * p1 * x2 + 2 * g_a * k * x1 * p2)


def hp_quadratic(params, phase):
    """Hessian of the classical energy at the phase's stationary point.

    Returns (M, displacements, e0) with M the 4x4 quadratic form in
    (x1, p1, x2, p2) and e0 the mean-field energy per spin.
    """
    wm = params.omega_m
    tau = params.tau
    w_a, c_a, g_a, gp_a = couplings(params)
    z0 = mean_field(params, phase)
    m = np.zeros((4, 4))
    if phase == "normal":
        m[0, 0] = wm - 4 * c_a
        m[1, 1] = wm
        m[2, 2] = m[3, 3] = w_a
        m[0, 3] = m[3, 0] = 2 * g_a
        m[1, 2] = m[2, 1] = -2 * gp_a
    else:
        if tau > 1:
            raise PhaseError(tau, "abnormal phase requires tau <= 1")
        m[0, 0] = (2 * g_a ** 2 * (tau - 1) ** 2 / (w_a * (tau + 1))
                   - 6 * g_a ** 2 * (tau - 1) / w_a
                   - 10 * c_a * (tau - 1) - 2 * c_a * (tau + 1) + wm)
        m[1, 1] = 2 * g_a ** 2 * (1 - tau) / w_a + 2 * c_a * (1 - tau) + wm
        m[2, 2] = m[3, 3] = w_a
        m[0, 3] = m[3, 0] = 2 * g_a * tau * np.sqrt(2.0 / (1 + tau))
        m[1, 2] = m[2, 1] = -gp_a * np.sqrt(2 * (1 + tau))
    return m, z0, classical_energy(params, z0)


def symplectic_eigenvalues(m):
    """Normal-mode frequencies of the quadratic form 1/2 z^T M z.

    Interleaved (x1,p1,x2,p2) ordering; returns the two nonnegative
    frequencies sorted ascending.  A dynamically unstable form (complex
    frequencies) raises PhaseError-style ValueError upstream.
    """
    j = np.zeros((4, 4))
    j[0, 1] = j[2, 3] = 1.0
    j[1, 0] = j[3, 2] = -1.0
    evals = np.linalg.eigvals(j @ m)
    re = np.abs(evals.real)
    im = np.abs(evals.imag)
    if re.max() > 1e-9 * max(im.max(), 1.0):
        return None  # unstable: eigenvalues left the imaginary axis
    freqs = np.sort(im)
    return np.array([freqs[0], freqs[2]])  # one per +- pair


def polariton_energies(params, phase):
    """(E_minus, E_plus) of the requested phase via Bogoliubov diagonalization."""
    m, _, _ = hp_quadratic(params, phase)
    freqs = symplectic_eigenvalues(m)
    if freqs is None:
        raise PhaseError(params.tau, f"complex lower polariton in {phase} phase")
    return freqs[0], freqs[1]


def ground_energy_thermo(params, phase):
    """Per-spin mean-field energy plus the O(1) zero-point term (E+ + E-)/2."""
    m, _, e0 = hp_quadratic(params, phase)
    freqs = symplectic_eigenvalues(m)
    if freqs is None:
        raise PhaseError(params.tau, f"complex lower polariton in {phase} phase")
    return e0, 0.5 * freqs.sum()


def order_parameter(params):
    """Thermodynamic transverse polarization P^a_{T alpha} = -alpha rho d sqrt(1-tau^2)."""
    tau = params.tau
    if tau >= 1:
        return 0.0
    return -params.alpha * params.rho * params.d * np.sqrt(1 - tau ** 2)


def pi_expectation(params):
    """Thermodynamic Pi field; the kinematic sum rule gives Pi = -P_{T alpha}."""
    return -order_parameter(params)


def gauge_invariant_polarization(params):
    """P_T in the abnormal phase: -rho d sqrt(1-tau^2), independent of alpha."""
    tau = params.tau
    if tau >= 1:
        return 0.0
    return -params.rho * params.d * np.sqrt(1 - tau ** 2)


def critical_tau(params, bracket=(0.5, 2.0), tol=1e-12, phase="normal"):
    """Critical point located as the stability boundary of the phase's branch.

    The lower polariton of the normal (abnormal) branch is real on tau >= 1
    (tau <= 1) and the quadratic form turns dynamically unstable across the
    boundary, so bisection on the stability indicator converges to the root
    of E_- to machine precision.
    """
    def stable(tau):
        p = DickeParams.at_tau(tau, alpha=params.alpha, omega_m=params.omega_m,
                               omega=params.omega, d=params.d)
        try:
            m, _, _ = hp_quadratic(p, phase)
        except PhaseError:
            return False
        return symplectic_eigenvalues(m) is not None

    lo, hi = bracket
    s_lo, s_hi = stable(lo), stable(hi)
    if s_lo == s_hi:
        raise ValueError(f"bracket {bracket} does not straddle the boundary")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(hi - lo) < tol:
            break
        if stable(mid) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def parity_operator(params):
    """Conserved excitation parity (-1)^(J^z + N/2 + n) on spin (x) Fock."""
    n = params.n_spins
    spin = np.diag((-1.0) ** (np.arange(n + 1)))
    boson = np.diag((-1.0) ** (np.arange(params.n_boson)))
    return np.kron(spin, boson)


def finite_n_gap(params):
    """First excitation gap within the ground state's parity sector.

    In the broken phase the raw first gap is the exponentially small parity
    doublet splitting; the quasiparticle gap lives inside one sector.
    """
    import warnings
    h = build_dicke_finiteN(params)
    par = parity_operator(params)
    w, v = np.linalg.eigh(h.data)
    tail = boson_tail(params, v[:, 0])
    if tail > 1e-8:
        warnings.warn(f"boson occupation tail {tail:.2e} at tau={params.tau:.3f}; "
                      "enlarge n_boson", RuntimeWarning)
    signs = np.real(np.einsum("ij,jk,ki->i", v.conj().T, par.astype(complex), v))
    ground_sign = np.sign(signs[0])
    same = np.where(np.sign(signs[1:]) == ground_sign)[0]
    return w[1 + same[0]] - w[0]


def finite_n_gap_minimum(params, taus):
    """tau at which the finite-N parity-resolved gap is smallest."""
    gaps = []
    for tau in taus:
        p = DickeParams.at_tau(tau, alpha=params.alpha, omega_m=params.omega_m,
                               omega=params.omega, d=params.d,
                               n_spins=params.n_spins, n_boson=params.n_boson)
        gaps.append(finite_n_gap(p))
    gaps = np.array(gaps)
    return taus[int(np.argmin(gaps))], gaps
