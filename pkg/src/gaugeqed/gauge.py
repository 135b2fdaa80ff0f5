"""Single-mode alpha-gauge light-matter Hamiltonians.

The builder works in the material energy basis (M retained levels) tensored
with a truncated Fock space.  Couplings are parameterized by the dimensionless
eta = d / sqrt(2 omega v) with d = q x01, so the single internal scale factor
is s := q/sqrt(2 omega v) = eta/x01.  In these units

    H_alpha = H_m + omega(n + 1/2)
              - (1-alpha) (s/m_eff) p (a^dag + a)
              + (1-alpha)^2 (s^2/2 m_eff) (a^dag + a)^2
              + alpha s omega x i(a^dag - a)
              + alpha^2 s^2 omega x^2

with x, p, m_eff taken from the material solve (omega_m = 1 units).
"""

from dataclasses import dataclass, replace
import math
import numpy as np

from . import opalg
from .opalg import Operator, StateVector, tensor, expi, eig_hermitian
from .series import TimeSeries


def default_n_fock(eta):
    return 20 + math.ceil(40 * eta ** 2)


@dataclass(frozen=True)
class SystemConfig:
    material: object            # MaterialSpectrum
    eta: float
    delta: float = 1.0
    alpha: float = 1.0
    n_fock: int = 0             # 0 -> default heuristic

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be >= 0")
        if self.n_fock == 0:
            object.__setattr__(self, "n_fock", default_n_fock(self.eta))
        if self.n_fock < 4:
            raise ValueError("n_fock must be >= 4")

    @property
    def omega(self):
        return self.delta * self.material.omega_m

    @property
    def scale(self):
        return self.eta / self.material.x01

    def dims(self):
        return (len(self.material.levels), self.n_fock)


@dataclass(frozen=True)
class GaugeProfile:
    """Either a constant gauge parameter or a frequency-dependent alpha(omega)."""
    value: float = None
    func: object = None

    def __call__(self, omega):
        if self.func is not None:
            return self.func(omega)
        return self.value


def alpha_jc(omega_m, omega):
    """The gauge in which the bilinear counter-rotating coupling vanishes."""
    if np.any(np.asarray(omega_m) <= 0) or np.any(np.asarray(omega) <= 0):
        raise ValueError("frequencies must be positive")
    return omega_m / (omega_m + omega)


def _factors(cfg):
    mat = cfg.material
    nm, nf = cfg.dims()
    a = np.diag(np.sqrt(np.arange(1, nf, dtype=float)), 1).astype(complex)
    hm = np.diag(mat.levels).astype(complex)
    return mat, nm, nf, a, hm


def hamiltonian_parts(cfg):
    """(H0, V1, V2): free part, terms linear in eta, terms quadratic in eta.

    H_alpha = H0 + V1 + V2; with a coupling envelope mu(t) the pieces scale as
    V1 -> mu V1 and V2 -> mu^2 V2.
    """
    mat, nm, nf, a, hm = _factors(cfg)
    s = cfg.scale
    w = cfg.omega
    al = cfg.alpha
    eye_m = np.eye(nm)
    eye_f = np.eye(nf)
    adpa = a.conj().T + a
    iadma = 1j * (a.conj().T - a)
    nph = np.diag(np.arange(nf, dtype=float))

    h0 = np.kron(hm, eye_f) + np.kron(eye_m, w * (nph + 0.5 * eye_f))
    v1 = (-(1 - al) * (s / mat.m_eff) * np.kron(mat.p, adpa)
          + al * s * w * np.kron(mat.x, iadma))
    v2 = ((1 - al) ** 2 * (s ** 2 / (2 * mat.m_eff)) * np.kron(eye_m, adpa @ adpa)
          + al ** 2 * s ** 2 * w * np.kron(mat.x @ mat.x, eye_f))
    dims = cfg.dims()
    return Operator(dims, h0), Operator(dims, v1), Operator(dims, v2)


def build_h_alpha(cfg):
    h0, v1, v2 = hamiltonian_parts(cfg)
    return h0 + v1 + v2


def gauge_generator(cfg):
    """q x A in builder units: s * x (x) (a^dag + a)."""
    mat, nm, nf, a, _ = _factors(cfg)
    return Operator(cfg.dims(), cfg.scale * np.kron(mat.x, a.conj().T + a))


def gauge_unitary(cfg, alpha_from, alpha_to):
    """R mapping the alpha_from representation onto alpha_to: R H_from R^dag ~ H_to."""
    return expi((alpha_from - alpha_to) * gauge_generator(cfg))


def photon_number_rel(cfg):
    nm, nf = cfg.dims()
    return Operator(cfg.dims(), np.kron(np.eye(nm), np.diag(np.arange(nf, dtype=float))))


class GroundDegeneracyError(Exception):
    """Degenerate ground state; carries the photon number of both branches."""

    def __init__(self, gap, branches):
        self.gap = gap
        self.branches = branches
        super().__init__(f"ground state degenerate (gap {gap:.3e}); "
                         f"branch photon numbers {branches}")


def ground_photons(cfg, degeneracy_tol=1e-12):
    import scipy.linalg
    h = build_h_alpha(cfg)
    n = photon_number_rel(cfg)
    w, v = scipy.linalg.eigh(h.data, subset_by_index=(0, 1))
    if w[1] - w[0] < degeneracy_tol:
        branches = [float(np.real(np.vdot(v[:, k], n.data @ v[:, k])))
                    for k in range(2)]
        raise GroundDegeneracyError(w[1] - w[0], branches)
    g = v[:, 0]
    return float(np.real(np.vdot(g, n.data @ g)))


def ground_photons_converged(cfg, tol=1e-6, max_rounds=4):
    """Photon number with the n_fock+8 / levels+4 convergence contract applied."""
    from .material import solve_material
    val = ground_photons(cfg)
    for _ in range(max_rounds):
        mat = cfg.material
        model = mat.model
        bigger = solve_material(
            replace(model, target_levels=model.target_levels + 4),
            _check_convergence=False)
        cfg2 = replace(cfg, material=bigger, n_fock=cfg.n_fock + 8)
        val2 = ground_photons(cfg2)
        if abs(val2 - val) < tol * max(abs(val2), 1e-12):
            return val2, abs(val2 - val)
        cfg, val = cfg2, val2
    raise opalg.ConvergenceError("ground photon number did not converge", abs(val2 - val))


def bilinear_coefficients(cfg):
    """(u_plus, u_minus) read off the built Hamiltonian (harmonic material).

    u_plus multiplies i(a^dag b^dag - a b), u_minus multiplies i(a b^dag - a^dag b),
    matching the bilinear normal form of the single-mode harmonic-dipole model.
    """
    h = build_h_alpha(cfg).data
    nm, nf = cfg.dims()

    def idx(n_mat, n_ph):
        return n_mat * nf + n_ph

    u_plus = complex(h[idx(1, 1), idx(0, 0)]) / 1j
    u_minus = complex(h[idx(1, 0), idx(0, 1)]) / 1j
    return u_plus.real, u_minus.real


# --- coupling envelopes ------------------------------------------------------

@dataclass(frozen=True)
class Envelope:
    """Scalar envelope mu(t) with an optional analytic derivative."""
    func: object
    deriv: object = None
    name: str = "custom"

    def __call__(self, t):
        return self.func(t)


def step_envelope(t_on, t_off):
    return Envelope(lambda t: 1.0 if t_on <= t < t_off else 0.0, None, "step")


def gaussian_envelope(t_center, width):
    f = lambda t: math.exp(-((t - t_center) ** 2) / (2 * width ** 2))
    df = lambda t: -(t - t_center) / width ** 2 * f(t)
    return Envelope(f, df, "gaussian")


def raised_cosine_envelope(t_start, duration):
    def f(t):
        if t <= t_start or t >= t_start + duration:
            return 0.0
        return 0.5 * (1 - math.cos(2 * math.pi * (t - t_start) / duration))

    def df(t):
        if t <= t_start or t >= t_start + duration:
            return 0.0
        return math.pi / duration * math.sin(2 * math.pi * (t - t_start) / duration)

    return Envelope(f, df, "raised-cosine")


def h_alpha_of_t(cfg, alpha, envelope):
    """H_alpha(t) = H_m + H_ph + V^alpha(eta mu(t)) as a callable of t."""
    cfg_a = replace(cfg, alpha=alpha)
    h0, v1, v2 = hamiltonian_parts(cfg_a)

    def h_of_t(t):
        mu = envelope(t)
        return Operator(cfg.dims(), h0.data + mu * v1.data + mu * mu * v2.data)

    return h_of_t


def bare_ground(cfg):
    nm, nf = cfg.dims()
    vec = np.zeros(nm * nf, dtype=complex)
    vec[0] = 1.0
    return StateVector(cfg.dims(), vec)


def evolve_switched(cfg, alpha, envelope, t_grid, tol=1e-9, max_depth=14):
    """N_alpha(t) for a bare-ground preparation under H_alpha(t)."""
    h_of_t = h_alpha_of_t(cfg, alpha, envelope)
    states = opalg.evolve_schrodinger(h_of_t, bare_ground(cfg), t_grid, tol=tol,
                                      max_depth=max_depth)
    n = photon_number_rel(cfg).data
    vals = np.array([np.real(np.vdot(s.amplitudes, n @ s.amplitudes)) for s in states])
    return TimeSeries(np.asarray(t_grid, dtype=float), vals, label=f"N_alpha(alpha={alpha})")


def _gauge_rotation_factory(cfg):
    """Callable theta -> exp(i theta q x A), with the generator prediagonalized."""
    gen = gauge_generator(cfg)
    w, v = eig_hermitian(gen)
    vd = v.data
    vdh = vd.conj().T

    def rot(theta):
        return (vd * np.exp(1j * theta * w)) @ vdh

    return gen, rot


def transformed_h_of_t(cfg, alpha, alpha_prime, envelope):
    """H_alpha^{alpha'}(t) = R H_alpha(t) R^dag + i Rdot R^dag as a callable of t.

    R(t) = exp(i (alpha - alpha') q mu(t) x A); needs the envelope's analytic
    derivative for the i Rdot R^dag term.
    """
    if envelope.deriv is None:
        raise ValueError("envelope must carry an analytic derivative")
    h_of_t = h_alpha_of_t(cfg, alpha, envelope)
    gen, rot = _gauge_rotation_factory(cfg)

    def h_prime(t):
        mu = envelope(t)
        r = rot((alpha - alpha_prime) * mu)
        ham = r @ h_of_t(t).data @ r.conj().T
        ham = ham - (alpha - alpha_prime) * envelope.deriv(t) * gen.data
        return Operator(cfg.dims(), ham)

    return h_prime


def evolve_transformed(cfg, alpha, alpha_prime, envelope, t_grid, tol=1e-9):
    """N_alpha(t) computed in the alpha' picture of H_alpha(t).

    Evolves under H_alpha^{alpha'}(t) and measures R n R^dag, which must
    reproduce evolve_switched(cfg, alpha, ...) pointwise.
    """
    h_prime = transformed_h_of_t(cfg, alpha, alpha_prime, envelope)
    _, rot = _gauge_rotation_factory(cfg)
    psi0 = bare_ground(cfg)
    # the alpha' picture starts from R(0)|g>; R(0) = 1 only if mu(0) = 0
    r0 = rot((alpha - alpha_prime) * envelope(t_grid[0]))
    psi0 = StateVector(cfg.dims(), r0 @ psi0.amplitudes)
    states = opalg.evolve_schrodinger(h_prime, psi0, t_grid, tol=tol)
    n = photon_number_rel(cfg).data
    vals = []
    for t, s in zip(t_grid, states):
        r = rot((alpha - alpha_prime) * envelope(t))
        n_rot = r @ n @ r.conj().T
        vals.append(np.real(np.vdot(s.amplitudes, n_rot @ s.amplitudes)))
    return TimeSeries(np.asarray(t_grid, dtype=float), np.array(vals),
                      label=f"N_alpha(alpha={alpha} via {alpha_prime})")
