"""1-D multimode cavity with a two-level dipole in the independent-boson limit.

Periodic cavity of length L, modes k = 2 pi n / L with n = -N..N; the dipole
sits at x = 0 and its two-level splitting is dropped, so sigma^x is conserved
and everything reduces to closed-form mode sums.  Field maps are sampled on
the cosine-sum grid x_j = j L/(2N+1), where the static Dirichlet kernel
vanishes identically away from the dipole.
"""

from dataclasses import dataclass
import numpy as np

from .series import FieldMap
from .opalg import Operator, expi


@dataclass(frozen=True)
class CavitySpec:
    length: float = 1.0
    n_modes: int = 50           # positive-mode count
    d: float = 1.0
    volume: float = 1.0

    def __post_init__(self):
        if self.n_modes < 10:
            raise ValueError("need at least 10 positive modes")

    @property
    def k_positive(self):
        return 2 * np.pi * np.arange(1, self.n_modes + 1) / self.length

    @property
    def omega_positive(self):
        return self.k_positive

    def grid_x(self):
        """Sampling points x_j = j L / (2N+1), the natural cosine-sum grid."""
        m = 2 * self.n_modes + 1
        return self.length * np.arange(m) / m


def coupling_constants(spec):
    """g_k = d sqrt(w_k / 2 v) for the positive modes."""
    return spec.d * np.sqrt(spec.omega_positive / (2 * spec.volume))


def polaron_displacements(spec):
    """Displacement list g_k/w_k of the diagonalizing polaron transformation."""
    return coupling_constants(spec) / spec.omega_positive


def polaron_unitary(spec, n_fock, modes=2):
    """Materialized polaron unitary exp[i sum_k (g_k/w_k)(a_k^dag+a_k) sigma^x].

    Only the first `modes` positive modes are materialized (desk scale).
    """
    disp = polaron_displacements(spec)[:modes]
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    dims = (2,) + (n_fock,) * modes
    d_total = 2 * n_fock ** modes
    gen = np.zeros((d_total, d_total), dtype=complex)
    for j, dj in enumerate(disp):
        ops = [sx] + [np.eye(n_fock, dtype=complex)] * modes
        a = np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1).astype(complex)
        ops[1 + j] = a.conj().T + a
        term = ops[0]
        for o in ops[1:]:
            term = np.kron(term, o)
        gen += dj * term
    return expi(Operator(dims, gen))


def independent_boson_hamiltonian(spec, n_fock, modes=2):
    """H = sum w_k a_k^dag a_k + i sum g_k (a_k^dag - a_k) sigma^x, materialized."""
    g = coupling_constants(spec)[:modes]
    w = spec.omega_positive[:modes]
    dims = (2,) + (n_fock,) * modes
    d_total = 2 * n_fock ** modes
    h = np.zeros((d_total, d_total), dtype=complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    eye2 = np.eye(2, dtype=complex)
    a = np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1).astype(complex)
    for j in range(modes):
        ops_n = [eye2] + [np.eye(n_fock, dtype=complex)] * modes
        ops_n[1 + j] = a.conj().T @ a
        ops_c = [sx] + [np.eye(n_fock, dtype=complex)] * modes
        ops_c[1 + j] = 1j * (a.conj().T - a)
        tn = ops_n[0]
        tc = ops_c[0]
        for on, oc in zip(ops_n[1:], ops_c[1:]):
            tn = np.kron(tn, on)
            tc = np.kron(tc, oc)
        h += w[j] * tn + g[j] * tc
    return Operator(dims, h)


def pi_field_operator(spec, n_fock, x, modes=2):
    """Canonical momentum Pi(x) restricted to the materialized positive modes."""
    w = spec.omega_positive[:modes]
    dims = (2,) + (n_fock,) * modes
    d_total = 2 * n_fock ** modes
    out = np.zeros((d_total, d_total), dtype=complex)
    a = np.diag(np.sqrt(np.arange(1, n_fock, dtype=float)), 1).astype(complex)
    for j in range(modes):
        k = spec.k_positive[j]
        phase = np.exp(1j * k * x)
        ops = [np.eye(2, dtype=complex)] + [np.eye(n_fock, dtype=complex)] * modes
        ops[1 + j] = 1j * np.sqrt(w[j] / (2 * spec.volume)) * (
            a.conj().T * np.conj(phase) - a * phase)
        term = ops[0]
        for o in ops[1:]:
            term = np.kron(term, o)
        out += term
    return Operator(dims, out)


def p_t1_operator(spec, n_fock, x, modes=2):
    """P_T1(x) = (d/v) sigma^x sum_k cos(kx) over the materialized positive modes."""
    dims = (2,) + (n_fock,) * modes
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    ks = spec.k_positive[:modes]
    coeff = (spec.d / spec.volume) * np.sum(np.cos(ks * x))
    eye_f = np.eye(n_fock ** modes, dtype=complex)
    return Operator(dims, coeff * np.kron(sx, eye_f))


def dirichlet_kernel(spec, x):
    """sum over all modes of cos(kx) = 1 + 2 sum_{k>0} cos(kx)."""
    ks = spec.k_positive
    return 1.0 + 2.0 * np.sum(np.cos(ks * np.asarray(x)[..., None]), axis=-1)


def field_map_excited(spec, alpha, observable, t_vals, x_vals=None):
    """(t,x) map of <O_alpha^2> - E_vac or <O^- O^+> for the initial state |e,0>.

    observable: 'O2' or 'OmOp'.
    """
    if x_vals is None:
        x_vals = spec.grid_x()
    t_vals = np.asarray(t_vals, dtype=float)
    x_vals = np.asarray(x_vals, dtype=float)
    ks = spec.k_positive
    ws = spec.omega_positive
    dv = spec.d / spec.volume
    cos_kx = np.cos(np.outer(x_vals, ks))          # (nx, N)
    vals = np.empty((len(t_vals), len(x_vals)))
    for i, t in enumerate(t_vals):
        if observable == "O2":
            # full symmetric mode sum including k=0
            s = dv * ((1 - alpha)
                      + 2 * cos_kx @ (np.cos(ws * t) - alpha))
            vals[i] = s ** 2
        elif observable == "OmOp":
            s = dv * ((1 - alpha) / 2.0
                      + cos_kx @ (np.exp(1j * ws * t) - alpha))
            vals[i] = np.abs(s) ** 2
        else:
            raise ValueError(f"unknown observable {observable!r}")
    return FieldMap(t_vals, x_vals, vals, label=f"excited {observable} alpha={alpha}")


def field_map_ground(spec, alpha, t_vals, x_vals=None, observable="O2"):
    """Ground-state map: the static electrostatic bound field, weight alpha^2."""
    if x_vals is None:
        x_vals = spec.grid_x()
    t_vals = np.asarray(t_vals, dtype=float)
    x_vals = np.asarray(x_vals, dtype=float)
    ks = spec.k_positive
    dv = spec.d / spec.volume
    s = dv * alpha * 2 * np.sum(np.cos(np.outer(x_vals, ks)), axis=1)
    row = s ** 2
    if observable == "OmOp":
        row = row / 4.0
    vals = np.tile(row, (len(t_vals), 1))
    return FieldMap(t_vals, x_vals, vals, label=f"ground {observable} alpha={alpha}")


def normalization_value(spec, alpha, observable="OmOp"):
    """Map value when the propagating pulse revisits the dipole, (t,x)=(L,0)."""
    m = field_map_excited(spec, alpha, observable, [spec.length], np.array([0.0]))
    return float(m.values[0, 0])
