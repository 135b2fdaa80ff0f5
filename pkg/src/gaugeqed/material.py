"""1-D material Hamiltonians on a position grid.

Solves harmonic, double-well and Josephson-cosine dipoles with a sinc-DVR
(spectrally accurate kinetic matrix), normalizes the spectrum so the first
transition is 1, and exports the position/momentum matrix elements that every
Hamiltonian builder downstream consumes.

Double-well family: H = (E/2)(-d^2/dz^2 - beta z^2 + z^4/2), with the overall
scale E fixed by the omega_m = 1 normalization, so beta is the only shape
parameter.
"""

from dataclasses import dataclass
import numpy as np

from .opalg import ConvergenceError


class BoundaryLeakError(Exception):
    """Ground state has not decayed at the grid edge; widen the grid."""

    def __init__(self, leak, grid):
        self.leak = leak
        self.grid = grid
        super().__init__(
            f"ground-state boundary amplitude {leak:.3e} on grid {grid}; widen the grid")


@dataclass(frozen=True)
class MaterialModel:
    kind: str                  # 'harmonic' | 'double_well' | 'josephson'
    param: float               # omega_m | beta | E_J ratio
    grid: tuple = (-9.0, 9.0, 768)
    target_levels: int = 12

    def __post_init__(self):
        if self.kind not in ("harmonic", "double_well", "josephson"):
            raise ValueError(f"unknown material kind {self.kind!r}")
        if self.grid[2] < 8 * self.target_levels:
            raise ValueError("grid too coarse: need N_grid >= 8*target_levels")


@dataclass(frozen=True)
class MaterialSpectrum:
    levels: np.ndarray         # ascending, omega_m = 1 units
    x: np.ndarray              # position matrix elements, energy basis
    p: np.ndarray              # momentum matrix elements, energy basis
    x2: np.ndarray             # exact matrix elements of x^2 (grid quadrature)
    m_eff: float               # effective mass in the normalized units
    mu: float                  # anharmonicity (w21 - w10)/w10
    model: MaterialModel = None

    @property
    def omega_m(self):
        return self.levels[1] - self.levels[0]

    @property
    def x01(self):
        return abs(self.x[0, 1])

    def omega(self, n, m):
        return self.levels[n] - self.levels[m]


def potential(model, z):
    if model.kind == "harmonic":
        return 0.5 * model.param ** 2 * z ** 2
    if model.kind == "double_well":
        return 0.5 * (-model.param * z ** 2 + 0.5 * z ** 4)
    # flux-frustrated cosine well: central barrier for E_J > 1
    return 0.5 * z ** 2 + model.param * np.cos(z)


def _sinc_dvr(zmin, zmax, n):
    """Grid, kinetic matrix (-1/2 d^2/dz^2) and derivative matrix on a sinc DVR."""
    z = np.linspace(zmin, zmax, n)
    dz = z[1] - z[0]
    i = np.arange(n)
    diff = i[:, None] - i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(diff == 0, np.pi ** 2 / 3.0, 2.0 * (-1.0) ** diff / diff.astype(float) ** 2)
        d1 = np.where(diff == 0, 0.0, (-1.0) ** diff / diff.astype(float))
    return z, t / dz ** 2 * 0.5, d1 / dz


def _solve_raw(model):
    z, kin, d1 = _sinc_dvr(*model.grid)
    h = kin + np.diag(potential(model, z))
    w, v = np.linalg.eigh(h)
    return z, d1, w, v


def solve_material(model, _check_convergence=True):
    """Solve the 1-D Hamiltonian and return the normalized MaterialSpectrum.

    The raw spectrum (unit mass, raw energy scale) is rescaled so the first
    transition energy is exactly 1.  The canonical pair (x, p) is left
    untouched ([x, p] = i is scale-free), so in the normalized units the
    effective mass is m_eff = raw first gap, and p_nm = i m_eff w_nm x_nm
    carries over exactly.
    """
    z, d1, w, v = _solve_raw(model)
    nl = model.target_levels

    leak = np.abs(v[[0, -1], :nl]).max() / np.abs(v[:, :nl]).max()
    if leak > 1e-8:
        raise BoundaryLeakError(leak, model.grid)

    if _check_convergence:
        fine = MaterialModel(model.kind, model.param,
                             (model.grid[0], model.grid[1], 2 * model.grid[2]),
                             model.target_levels)
        _, _, w2, _ = _solve_raw(fine)
        t1 = w[1:nl + 1] - w[0]
        t2 = w2[1:nl + 1] - w2[0]
        rel = np.abs(t1 - t2).max() / np.abs(t2).max()
        if rel > 1e-8:
            raise ConvergenceError("grid-doubling change in transitions too large", rel)

    gap = w[1] - w[0]
    levels = w[:nl] / gap
    vecs = v[:, :nl]
    # symmetric potentials: restore exact parity (numerically mixed inside
    # near-degenerate tunneling doublets) by projecting on the dominant sector
    vpot = potential(model, z)
    if abs(model.grid[0] + model.grid[1]) < 1e-12 and \
            np.abs(vpot - vpot[::-1]).max() < 1e-10 * max(np.abs(vpot).max(), 1.0):
        for k in range(nl):
            even = 0.5 * (vecs[:, k] + vecs[::-1, k])
            odd = 0.5 * (vecs[:, k] - vecs[::-1, k])
            pick = even if np.linalg.norm(even) >= np.linalg.norm(odd) else odd
            vecs[:, k] = pick / np.linalg.norm(pick)
    # fix eigenvector sign: largest-|.| component real positive
    for k in range(nl):
        j = np.argmax(np.abs(vecs[:, k]))
        vecs[:, k] *= np.sign(vecs[j, k])
    x = (vecs.T * z) @ vecs
    x2 = (vecs.T * z ** 2) @ vecs
    p = vecs.T @ (-1j * d1) @ vecs
    mu = (levels[2] - levels[1]) / (levels[1] - levels[0]) - 1.0 if nl >= 3 else 0.0
    return MaterialSpectrum(levels=levels, x=x.astype(complex), p=p.astype(complex),
                            x2=x2.astype(complex), m_eff=gap, mu=mu, model=model)


def two_level(spectrum):
    """(omega_m, x01) of the lowest transition, in normalized units."""
    return spectrum.omega_m, spectrum.x01


def calibrate_anharmonicity(kind, mu_target, grid=None, target_levels=12,
                            tol_rel=1e-3, max_iter=200):
    """Find the family parameter that gives the requested anharmonicity.

    Brackets mu(param) by scanning, then bisects.  mu is monotone increasing
    in beta for the double well (deeper wells shrink the tunneling splitting)
    and in E_J for the cosine family over the scanned range.
    """
    if kind == "harmonic":
        if abs(mu_target) > 1e-12:
            raise ValueError("harmonic oscillator has mu = 0")
        return MaterialModel("harmonic", 1.0)

    def mu_of(param):
        g = grid if grid is not None else _default_grid(kind, param)
        spec = solve_material(MaterialModel(kind, param, g, target_levels),
                              _check_convergence=False)
        return spec.mu

    lo, hi = 0.05, 1.0
    f_lo = mu_of(lo) - mu_target
    f_hi = mu_of(hi) - mu_target
    scans = 0
    while f_lo * f_hi > 0:
        lo, f_lo = hi, f_hi
        hi *= 1.6
        scans += 1
        if scans > 30:
            raise ConvergenceError(
                f"could not bracket mu={mu_target} for {kind}; scanned up to param={hi}",
                abs(f_hi))
        f_hi = mu_of(hi) - mu_target

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = mu_of(mid) - mu_target
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
        if abs(f_mid) < tol_rel * max(abs(mu_target), 1e-6):
            g = grid if grid is not None else _default_grid(kind, mid)
            return MaterialModel(kind, mid, g, target_levels)
    raise ConvergenceError(f"bisection for mu={mu_target} did not converge", abs(f_mid))


def _default_grid(kind, param):
    if kind == "double_well":
        half = max(6.0, np.sqrt(max(param, 1.0)) + 5.5)
        return (-half, half, 768)
    if kind == "josephson":
        return (-12.0, 12.0, 768)
    return (-9.0, 9.0, 768)


def trk_check(spectrum, level, basis_size):
    """sum_{n<M} w_nl |x_nl|^2; saturates at 1/(2 m_eff) for the full algebra."""
    if basis_size > len(spectrum.levels):
        raise ValueError("basis_size exceeds available levels")
    l = level
    total = 0.0
    for n in range(basis_size):
        if n == l:
            continue
        total += spectrum.omega(n, l) * abs(spectrum.x[n, l]) ** 2
    return total
