"""Dense finite-dimensional operator algebra.

Everything downstream (Hamiltonian builders, gauge rotations, propagation,
master equations) runs on plain complex numpy matrices wrapped in a thin
Operator type that remembers the tensor-factor dimensions.  All functions are
pure; no global state.
"""

from dataclasses import dataclass, field
import numpy as np
import scipy.linalg

HERMITICITY_TOL = 1e-12   # relative, against max|O|
UNITARITY_TOL = 1e-10


class OpalgError(Exception):
    pass


class NonHermitianError(OpalgError):
    """Raised when a Hermitian-only operation receives a non-Hermitian matrix."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"matrix is not Hermitian: max|O - O^dag| = {residual:.3e}")


class ConvergenceError(OpalgError):
    def __init__(self, message, achieved):
        self.achieved = achieved
        super().__init__(f"{message} (achieved tolerance {achieved:.3e})")


class DegenerateSteadyStateError(OpalgError):
    """More than one stationary state; carries a basis of the null space."""

    def __init__(self, states):
        self.states = states
        super().__init__(f"Liouvillian null space is {len(states)}-dimensional")


@dataclass(frozen=True)
class Operator:
    dims: tuple
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = int(np.prod(self.dims))
        if self.data.shape != (d, d):
            raise ValueError(f"data shape {self.data.shape} incompatible with dims {self.dims}")

    @property
    def dim(self):
        return self.data.shape[0]

    def dag(self):
        return Operator(self.dims, self.data.conj().T)

    def __matmul__(self, other):
        return Operator(self.dims, self.data @ other.data)

    def __add__(self, other):
        return Operator(self.dims, self.data + other.data)

    def __sub__(self, other):
        return Operator(self.dims, self.data - other.data)

    def __rmul__(self, scalar):
        return Operator(self.dims, scalar * self.data)


@dataclass(frozen=True)
class StateVector:
    dims: tuple
    amplitudes: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.amplitudes.shape[0]

    def overlap(self, other):
        return np.vdot(self.amplitudes, other.amplitudes)


@dataclass(frozen=True)
class DensityMatrix:
    dims: tuple
    matrix: np.ndarray = field(repr=False)


def identity(dims):
    dims = tuple(dims)
    return Operator(dims, np.eye(int(np.prod(dims)), dtype=complex))


def operator(data, dims=None):
    data = np.asarray(data, dtype=complex)
    if dims is None:
        dims = (data.shape[0],)
    return Operator(tuple(dims), data)


def hermiticity_residual(data):
    scale = max(np.abs(data).max(), 1.0)
    return np.abs(data - data.conj().T).max() / scale


def is_hermitian(op, tol=HERMITICITY_TOL):
    data = op.data if isinstance(op, Operator) else op
    return hermiticity_residual(data) < tol


def is_unitary(op, tol=UNITARITY_TOL):
    data = op.data if isinstance(op, Operator) else op
    d = data.shape[0]
    return np.abs(data.conj().T @ data - np.eye(d)).max() < tol


def tensor(a, b):
    """Kronecker product; factor dimensions concatenate."""
    return Operator(tuple(a.dims) + tuple(b.dims), np.kron(a.data, b.data))


def tensor_state(a, b):
    return StateVector(tuple(a.dims) + tuple(b.dims), np.kron(a.amplitudes, b.amplitudes))


def eig_hermitian(h):
    """Eigendecomposition of a Hermitian Operator.

    Returns (eigenvalues ascending, eigenvectors as a unitary Operator whose
    columns are the eigenvectors).  Rejects non-Hermitian input with the
    measured residual.
    """
    res = hermiticity_residual(h.data)
    if res >= HERMITICITY_TOL:
        raise NonHermitianError(res)
    w, v = np.linalg.eigh(0.5 * (h.data + h.data.conj().T))
    return w, Operator(h.dims, v)


def eigvals_hermitian(h):
    """Eigenvalues only (ascending); same Hermiticity contract as eig_hermitian."""
    res = hermiticity_residual(h.data)
    if res >= HERMITICITY_TOL:
        raise NonHermitianError(res)
    return np.linalg.eigvalsh(0.5 * (h.data + h.data.conj().T))


def expi(g):
    """exp(iG) for Hermitian G, via eigendecomposition (exactly unitary)."""
    w, v = eig_hermitian(g)
    return Operator(g.dims, (v.data * np.exp(1j * w)) @ v.data.conj().T)


def ground_state(h, degeneracy_tol=None):
    """Ground eigenvector with the phase fixed so the largest amplitude is real positive.

    If degeneracy_tol is given and the first gap is below it, raises OpalgError.
    Uses a two-lowest-eigenpair solve, much cheaper than the full spectrum.
    """
    res = hermiticity_residual(h.data)
    if res >= HERMITICITY_TOL:
        raise NonHermitianError(res)
    sym = 0.5 * (h.data + h.data.conj().T)
    k = min(1, sym.shape[0] - 1)
    w, v = scipy.linalg.eigh(sym, subset_by_index=(0, k))
    if degeneracy_tol is not None and len(w) > 1 and w[1] - w[0] < degeneracy_tol:
        raise OpalgError(f"ground state degenerate: gap {w[1]-w[0]:.3e}")
    vec = v[:, 0]
    j = np.argmax(np.abs(vec))
    vec = vec * (np.abs(vec[j]) / vec[j])
    return w[0], StateVector(h.dims, vec)


_GAUSS = np.sqrt(3.0) / 6.0          # Gauss nodes at 1/2 -+ sqrt(3)/6
_CF4_A1 = 0.25 - _GAUSS              # exponential weights, a1 + a2 = 1/2
_CF4_A2 = 0.25 + _GAUSS


def _step_propagate(h_of_t, psi, t0, t1, nsteps):
    """Fourth-order commutator-free Magnus steps (two exponentials per step).

    U = exp(-i dt (a1 H1 + a2 H2)) exp(-i dt (a2 H1 + a1 H2)), H_i at the
    Gauss nodes.  Exactly unitary; collapses to exp(-i H dt) when H is
    constant over the step, so piecewise-constant H is integrated exactly.
    """
    dt = (t1 - t0) / nsteps
    for j in range(nsteps):
        h1 = h_of_t(t0 + (j + 0.5 - _GAUSS) * dt)
        h2 = h_of_t(t0 + (j + 0.5 + _GAUSS) * dt)
        h1 = h1.data if isinstance(h1, Operator) else h1
        h2 = h2.data if isinstance(h2, Operator) else h2
        if hermiticity_residual(h1) >= 1e-10 or hermiticity_residual(h2) >= 1e-10:
            raise NonHermitianError(max(hermiticity_residual(h1),
                                        hermiticity_residual(h2)))
        for ga, gb in ((_CF4_A2, _CF4_A1), (_CF4_A1, _CF4_A2)):
            w, v = np.linalg.eigh(ga * h1 + gb * h2)
            psi = (v * np.exp(-1j * w * dt)) @ (v.conj().T @ psi)
    return psi


def evolve_schrodinger(h_of_t, psi0, t_grid, tol=1e-8, max_depth=14):
    """Propagate psi0 through H(t) across t_grid, adaptively refining each interval.

    h_of_t: callable t -> Hermitian Operator (or ndarray).
    Each interval is subdivided 2^k-fold, doubling k until two consecutive
    refinements agree to `tol` in the final state (vector norm, which bounds
    the overlap deficit).  Returns the list of StateVector at the grid nodes.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    dims = psi0.dims
    psi = np.array(psi0.amplitudes, dtype=complex)
    out = [StateVector(dims, psi.copy())]
    start_depth = 0
    for i in range(len(t_grid) - 1):
        t0, t1 = t_grid[i], t_grid[i + 1]
        prev = _step_propagate(h_of_t, psi, t0, t1, 2 ** start_depth)
        accepted = None
        err = np.inf
        for depth in range(start_depth + 1, max_depth + 1):
            cur = _step_propagate(h_of_t, psi, t0, t1, 2 ** depth)
            err = np.linalg.norm(cur - prev)
            if err < tol:
                accepted = cur
                break
            prev = cur
        if accepted is None:
            raise ConvergenceError(
                f"time step [{t0}, {t1}] did not converge after depth {max_depth}", err)
        psi = accepted
        # neighbouring intervals need similar resolution; restart one level down
        start_depth = max(depth - 1, 0)
        out.append(StateVector(dims, psi.copy()))
    return out


def liouvillian_matrix(h, jumps):
    """Superoperator L so that vec(drho/dt) = L vec(rho), row-major vec."""
    d = h.data.shape[0]
    eye = np.eye(d)
    # row-major vec: vec(A B C) = (A kron C^T) vec(B)
    lv = -1j * (np.kron(h.data, eye) - np.kron(eye, h.data.T))
    for rate, op in jumps:
        if rate < 0:
            raise ValueError("jump rates must be >= 0")
        c = op.data if isinstance(op, Operator) else op
        cdc = c.conj().T @ c
        lv += rate * (np.kron(c, c.conj())
                      - 0.5 * np.kron(cdc, eye)
                      - 0.5 * np.kron(eye, cdc.T))
    return lv


def lindblad_steady(h, jumps, residual_tol=1e-9, degeneracy_tol=1e-9):
    """Stationary state of the Lindblad generator (H, jumps).

    jumps: list of (rate, Operator).  Finds the null space of the vectorized
    Liouvillian; a unique null vector is normalized into a DensityMatrix.  A
    degenerate null space raises DegenerateSteadyStateError carrying one
    DensityMatrix per basis state where a trace-normalizable representative
    exists (the raw vectors otherwise).
    """
    lv = liouvillian_matrix(h, jumps)
    d = h.data.shape[0]
    scale = max(np.abs(lv).max(), 1.0)
    u, s, vh = np.linalg.svd(lv)
    null = [vh[k].conj() for k in range(len(s)) if s[k] < degeneracy_tol * scale]
    if not null:
        raise OpalgError(f"no steady state found: smallest singular value {s[-1]:.3e}")

    def to_rho(vec):
        rho = vec.reshape(d, d)
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        return rho / tr if abs(tr) > 1e-12 else None

    if len(null) > 1:
        states = []
        for vec in null:
            rho = to_rho(vec)
            states.append(DensityMatrix(h.dims, rho) if rho is not None else vec)
        raise DegenerateSteadyStateError(states)

    rho = to_rho(null[0])
    if rho is None:
        raise OpalgError("steady-state candidate is traceless")
    resid = np.abs(lv @ rho.reshape(-1)).max() / scale
    if resid >= residual_tol:
        raise ConvergenceError("Liouvillian residual too large", resid)
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-10:
        raise OpalgError(f"steady state not positive: min eigenvalue {evals.min():.3e}")
    return DensityMatrix(h.dims, rho)


def lindblad_evolve(h, jumps, rho0, t_grid):
    """RK4 integration of the Lindblad equation on t_grid (fixed step per interval)."""
    lv = liouvillian_matrix(h, jumps)
    d = h.data.shape[0]
    rho = np.array(rho0.matrix, dtype=complex).reshape(-1)
    out = [DensityMatrix(rho0.dims, rho.reshape(d, d).copy())]
    for i in range(len(t_grid) - 1):
        dt = t_grid[i + 1] - t_grid[i]
        nsub = max(1, int(np.ceil(dt * np.abs(lv).max() * 4)))
        hsub = dt / nsub
        for _ in range(nsub):
            k1 = lv @ rho
            k2 = lv @ (rho + 0.5 * hsub * k1)
            k3 = lv @ (rho + 0.5 * hsub * k2)
            k4 = lv @ (rho + hsub * k3)
            rho = rho + (hsub / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(DensityMatrix(rho0.dims, rho.reshape(d, d).copy()))
    return out


def partial_trace(rho, keep):
    """Trace out all factors not in `keep` (iterable of factor indices)."""
    keep = sorted(set(keep))
    dims = list(rho.dims)
    n = len(dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep={keep} invalid for {n} factors")
    mat = rho.matrix.reshape(dims + dims)
    # trace over complements, highest index first so axes stay valid
    for ax in reversed([i for i in range(n) if i not in keep]):
        mat = np.trace(mat, axis1=ax, axis2=ax + (mat.ndim // 2))
    d_keep = int(np.prod([dims[i] for i in keep]))
    return DensityMatrix(tuple(dims[i] for i in keep), mat.reshape(d_keep, d_keep))


def destroy(n):
    """Bosonic annihilation operator on an n-dimensional Fock space."""
    return Operator((n,), np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex))


def number(n):
    return Operator((n,), np.diag(np.arange(n, dtype=float)).astype(complex))
