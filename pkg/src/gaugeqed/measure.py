"""Weak-measurement pointer model: position distribution and moments.

The pointer is never discretized: the bare-qubit distribution is a
two-Gaussian mixture and the coupled moments are closed forms at order q^2,
with the counter-rotating weight u+(w) carrying the whole gauge dependence.
"""

from dataclasses import dataclass
import numpy as np
from scipy import integrate

from .multimode import u_plus, QuadratureError


@dataclass(frozen=True)
class PointerSetup:
    shift: float = 1.0             # displacement scale r-frak
    sigma: float = 0.0             # initial Gaussian width (0 = sharp limit)
    t_pointer: float = 1.0         # measurement duration

    def __post_init__(self):
        if self.sigma < 0 or self.t_pointer <= 0:
            raise ValueError("need sigma >= 0 and t_pointer > 0")


def pointer_distribution_bare(p1, setup):
    """Two-Gaussian mixture at -+ shift/2 with weights (1-p1, p1)."""
    if not 0 <= p1 <= 1:
        raise ValueError("p1 must be a probability")
    if setup.sigma == 0:
        raise ValueError("the sharp limit has no density; use the moment functions")
    s, r = setup.sigma, setup.shift

    def density(x):
        norm = 1.0 / (np.sqrt(2 * np.pi) * s)
        return norm * ((1 - p1) * np.exp(-(x + r / 2) ** 2 / (2 * s * s))
                       + p1 * np.exp(-(x - r / 2) ** 2 / (2 * s * s)))

    return density


def pointer_moments_bare(p1, setup):
    """(mean, variance) of the bare-qubit pointer record."""
    r = setup.shift
    mean = r * (p1 - 0.5)
    var = r * r * p1 * (1 - p1) + setup.sigma ** 2
    return mean, var


def sigma_z_singlemode(eta, delta, alpha, omega_m=1.0):
    """Ground-state <sigma^z> of the qubit+mode system at order q^2.

    <sigma^z> = -1/2 + (d^2/2v) w_m u+(w)^2/(w_m+w)^2, with u+ evaluated at
    the mode frequency w = delta w_m.  The dipole/volume combination d^2/2v
    is fixed by the coupling convention eta = d/sqrt(2 w v): d^2/2v = eta^2 w.
    """
    w = delta * omega_m
    up = u_plus(alpha, w, omega_m)
    d2_over_2v = eta ** 2 * w
    return -0.5 + d2_over_2v * omega_m * up ** 2 / (omega_m + w) ** 2


def pointer_moments_singlemode(eta, delta, alpha, setup, omega_m=1.0):
    """(mean, variance) for a qubit+single-mode ground state, order q^2."""
    w = delta * omega_m
    sz = sigma_z_singlemode(eta, delta, alpha, omega_m)
    r = setup.shift
    mean = r * sz
    var = (r * r * (0.25 - sz ** 2)
           * np.sinc(0.5 * (omega_m + w) * setup.t_pointer / np.pi) ** 2
           + setup.sigma ** 2)
    return mean, var


def pointer_moments_continuum(gamma, alpha_profile, omega_max, setup,
                              omega_m=1.0, rel_tol=1e-10, points=None):
    """(mean, variance) in the mode continuum at order q^2.

    mean = (r/2)(-1 + (Gamma/pi) I0),  I0 = int [w u+/(w_m(w_m+w))]^2
    var  = (r^2 Gamma/2 pi) int [w u+/(w_m(w_m+w))]^2 sinc[(w_m+w) t_P/2]

    Note the paper's continuum variance carries a single sinc power (the
    single-mode counterpart has sinc^2); the formula is taken as printed.
    `points` may list frequencies the adaptive rule must subdivide at
    (e.g. edges of a narrow-band profile).
    """
    def base(w):
        up = u_plus(alpha_profile, w, omega_m)
        return (w * up / (omega_m * (omega_m + w))) ** 2

    def with_sinc(w):
        x = 0.5 * (omega_m + w) * setup.t_pointer
        return base(w) * np.sinc(x / np.pi)

    i0, e0 = integrate.quad(base, 1e-12, omega_max, epsabs=1e-14,
                            epsrel=rel_tol, limit=500, full_output=1,
                            points=points)[:2]
    i1, e1 = integrate.quad(with_sinc, 1e-12, omega_max, epsabs=1e-14,
                            epsrel=rel_tol, limit=2000, full_output=1,
                            points=points)[:2]
    if e0 > max(1e-10, 1e-6 * abs(i0)) or e1 > max(1e-8, 1e-4 * abs(i1)):
        raise QuadratureError(i0, max(e0, e1))
    r = setup.shift
    mean = 0.5 * r * (-1.0 + gamma / np.pi * i0)
    var = r * r * gamma / (2 * np.pi) * i1 + setup.sigma ** 2
    return mean, var
