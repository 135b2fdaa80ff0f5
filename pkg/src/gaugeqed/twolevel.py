"""Two-level truncations of the single-mode alpha-gauge model.

Several inequivalent truncation maps coexist once the material algebra is cut
to two levels:

  standard_model      H_alpha^2 : x, p -> PxP, PpP inside the interaction
  model_tilde         ~H_alpha^2: built from calG = P R P (non-unitary)
  model_h             h_alpha^2(alpha') = calT H_alpha^2 calT^dag (unitary)
  modified_a2         Coulomb model with the A^2 term traded for a sigma^z
                      interaction through the two-level sum-rule identities

The projector P always targets the two lowest levels of the full material
solve; calG is evaluated in the full retained basis before projecting.
"""

from dataclasses import dataclass, replace
import numpy as np

from . import opalg
from .opalg import Operator, expi, eig_hermitian
from .gauge import SystemConfig, build_h_alpha, gauge_generator


@dataclass(frozen=True)
class TwoLevelParams:
    material: object           # full MaterialSpectrum (embedding basis)
    eta: float
    delta: float = 1.0
    n_fock: int = 24

    @property
    def omega_m(self):
        return self.material.omega_m

    @property
    def d(self):
        # transition dipole in q=scale units: q x01 = s x01 = eta sqrt(2 w v);
        # only ratios enter, so we track d through eta and x01
        return self.material.x01

    @property
    def omega(self):
        return self.delta * self.omega_m

    def config(self, alpha):
        return SystemConfig(self.material, eta=self.eta, delta=self.delta,
                            alpha=alpha, n_fock=self.n_fock)


def _fock_ops(n_fock):
    a = np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1).astype(complex)
    return a, np.eye(n_fock, dtype=complex)


def _projected(params):
    """Two-level restrictions of the material operators (energy basis)."""
    mat = params.material
    e = mat.levels[:2]
    x2 = mat.x[:2, :2]
    p2 = mat.p[:2, :2]
    return np.diag(e).astype(complex), x2, p2


def standard_model(params, alpha):
    """H_alpha^2 = P H_m P + P H_ph P + V^alpha(PxP, PpP) on 2 (x) n_fock."""
    mat = params.material
    s = params.eta / mat.x01
    w = params.omega
    hm2, x2, p2 = _projected(params)
    a, eye_f = _fock_ops(params.n_fock)
    eye_2 = np.eye(2)
    adpa = a.conj().T + a
    iadma = 1j * (a.conj().T - a)
    nph = np.diag(np.arange(params.n_fock, dtype=float))

    h = (np.kron(hm2, eye_f) + np.kron(eye_2, w * (nph + 0.5 * eye_f))
         - (1 - alpha) * (s / mat.m_eff) * np.kron(p2, adpa)
         + (1 - alpha) ** 2 * (s ** 2 / (2 * mat.m_eff)) * np.kron(eye_2, adpa @ adpa)
         + alpha * s * w * np.kron(x2, iadma)
         + alpha ** 2 * s ** 2 * w * np.kron(x2 @ x2, eye_f))
    return Operator((2, params.n_fock), h)


def _embed_projector(params):
    """P (x) 1 on the full (M, n_fock) space, targeting material levels {0,1}."""
    nm = len(params.material.levels)
    p = np.zeros((nm, nm))
    p[0, 0] = p[1, 1] = 1.0
    return np.kron(p, np.eye(params.n_fock))


def _restrict(params, full_matrix):
    """Cut an (M n_fock) x (M n_fock) matrix down to the 2 (x) n_fock block."""
    nf = params.n_fock
    idx = np.concatenate([np.arange(nf), np.arange(nf, 2 * nf)])
    return full_matrix[np.ix_(idx, idx)]


def calG(params, alpha, alpha_prime):
    """P R_{alpha alpha'} P, evaluated in the full basis, as a 2 (x) n_fock matrix."""
    cfg = params.config(alpha)
    r = expi((alpha - alpha_prime) * gauge_generator(cfg))
    proj = _embed_projector(params)
    return Operator((2, params.n_fock), _restrict(params, proj @ r.data @ proj))


def calT(params, alpha, alpha_prime):
    """exp(i q (alpha-alpha') PxP A): the unitary two-level rotation."""
    mat = params.material
    s = params.eta / mat.x01
    _, x2, _ = _projected(params)
    a, _ = _fock_ops(params.n_fock)
    gen = (alpha - alpha_prime) * s * np.kron(x2, a.conj().T + a)
    return expi(Operator((2, params.n_fock), gen))


def model_tilde(params, alpha):
    """~H_alpha^2 = calG_{1 alpha} P H_m P calG^dag + calG_{0 alpha} P H_ph P calG^dag."""
    hm2, _, _ = _projected(params)
    a, eye_f = _fock_ops(params.n_fock)
    w = params.omega
    nph = np.diag(np.arange(params.n_fock, dtype=float))
    hm_blk = np.kron(hm2, eye_f)
    hph_blk = np.kron(np.eye(2), w * (nph + 0.5 * eye_f))
    g1 = calG(params, 1.0, alpha).data
    g0 = calG(params, 0.0, alpha).data
    h = g1 @ hm_blk @ g1.conj().T + g0 @ hph_blk @ g0.conj().T
    return Operator((2, params.n_fock), h)


def model_h(params, alpha, alpha_prime):
    """h_alpha^2(alpha') = calT_{alpha alpha'} H_alpha^2 calT^dag; isospectral family."""
    h2 = standard_model(params, alpha)
    t = calT(params, alpha, alpha_prime)
    return Operator((2, params.n_fock), t.data @ h2.data @ t.data.conj().T)


def modified_a2(params):
    """Coulomb-gauge two-level model with q^2 A^2/2m replaced by -w_m (d A)^2 sigma^z.

    sigma^z = |e1><e1| - |e0><e0|; the replacement follows from evaluating the
    oscillator-strength sum over two levels separately on the ground and
    excited projections.
    """
    mat = params.material
    s = params.eta / mat.x01
    hm2, _, p2 = _projected(params)
    a, eye_f = _fock_ops(params.n_fock)
    eye_2 = np.eye(2)
    w = params.omega
    nph = np.diag(np.arange(params.n_fock, dtype=float))
    adpa = a.conj().T + a
    sz = np.diag([-1.0, 1.0])
    # (dA)^2 = (q x01 A)^2 = (s x01)^2 (a^dag+a)^2 / (2 w v) ... in builder units
    # qA = s (a^dag+a) so dA = q x01 A = s x01 (a^dag+a)
    da_sq = (s * mat.x01) ** 2 * (adpa @ adpa)
    h = (np.kron(hm2, eye_f) + np.kron(eye_2, w * (nph + 0.5 * eye_f))
         - (s / mat.m_eff) * np.kron(p2, adpa)
         - params.omega_m * np.kron(sz, da_sq))
    return Operator((2, params.n_fock), h)


def truncated_momentum_observables(params):
    """Two conventions for the truncated dressed momentum/energy pair.

    Returns ((K_std, E_std), (K_t, E_t)): the standard truncation of
    K = p + qA and its energy, versus the pair implied by treating the
    two-level rotation calT as if it were the Coulomb->multipolar gauge map.
    """
    mat = params.material
    s = params.eta / mat.x01
    hm2, _, p2 = _projected(params)
    a, eye_f = _fock_ops(params.n_fock)
    eye_2 = np.eye(2)
    adpa = a.conj().T + a
    dims = (2, params.n_fock)

    # standard: project p, then add the full photonic pieces
    qa = s * adpa
    k_std = np.kron(p2, eye_f) + np.kron(eye_2, qa)
    e_std = (np.kron(hm2, eye_f)
             - (s / mat.m_eff) * np.kron(p2, adpa)
             + (s ** 2 / (2 * mat.m_eff)) * np.kron(eye_2, adpa @ adpa))

    t01 = calT(params, 0.0, 1.0).data
    k_t = t01 @ np.kron(p2, eye_f) @ t01.conj().T
    e_t = t01 @ np.kron(hm2, eye_f) @ t01.conj().T
    return ((Operator(dims, k_std), Operator(dims, e_std)),
            (Operator(dims, k_t), Operator(dims, e_t)))


def transition_energies(h, k=6):
    w, _ = eig_hermitian(h)
    return w[1:k + 1] - w[0]


def transition_error_scan(material, alphas, etas, delta=1.0, k=3, n_fock=24,
                          exact_levels=None, exact_n_fock=None, models=("standard",)):
    """Relative first-k transition errors of two-level models vs the exact spectrum.

    Returns a dict keyed by (model, alpha, eta) -> array of k relative errors.
    The exact reference is the full multi-level model at the same eta.
    """
    results = {}
    exact_cache = {}
    for eta in etas:
        nf_exact = exact_n_fock or max(n_fock, 24 + int(40 * eta ** 2))
        cfg = SystemConfig(material, eta=eta, delta=delta, alpha=1.0, n_fock=nf_exact)
        ref = transition_energies(build_h_alpha(cfg), k)
        exact_cache[eta] = ref
        params = TwoLevelParams(material, eta=eta, delta=delta, n_fock=n_fock)
        for alpha in alphas:
            for model in models:
                if model == "standard":
                    h = standard_model(params, alpha)
                elif model == "tilde":
                    h = model_tilde(params, alpha)
                else:
                    raise ValueError(f"unknown model {model!r}")
                tr = transition_energies(h, k)
                results[(model, alpha, eta)] = np.abs(tr - ref) / np.abs(ref)
    return results
