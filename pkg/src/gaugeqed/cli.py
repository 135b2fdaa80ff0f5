"""Scenario runner: YAML config in, CSV datasets out.

Every scenario is a pure function of its parameter block; sweep points are
dispatched to a process pool and merged back in sweep order, so outputs are
byte-identical across runs and worker counts.  CSV headers carry the config
hash, the paper-figure tag where applicable, and the convergence knobs used.
"""

import argparse
import hashlib
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import yaml

from . import __version__


class ConfigError(Exception):
    pass


SCENARIOS = {}


def scenario(name, figure=None):
    def register(fn):
        SCENARIOS[name] = (fn, figure)
        return fn
    return register


def _fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, columns, rows, header_lines):
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _require(block, key, typ=None):
    if key not in block:
        raise ConfigError(f"missing field {key!r}")
    val = block[key]
    if typ is not None and not isinstance(val, typ):
        raise ConfigError(f"field {key!r} must be {typ}")
    return val


def _material_from_block(block):
    from .material import MaterialModel, solve_material, calibrate_anharmonicity
    kind = block.get("kind", "double_well")
    levels = int(block.get("levels", 12))
    if "mu" in block:
        model = calibrate_anharmonicity(kind, float(block["mu"]),
                                        target_levels=levels)
    elif kind == "harmonic":
        model = MaterialModel("harmonic", float(block.get("omega_m", 1.0)),
                              target_levels=levels)
    else:
        from .material import _default_grid
        param = float(_require(block, "param"))
        model = MaterialModel(kind, param, _default_grid(kind, param), levels)
    return solve_material(model, _check_convergence=False)


def _alpha_value(name, delta):
    from .gauge import alpha_jc
    if name == "jc":
        return alpha_jc(1.0, delta)
    return float(name)


# --- scenarios ---------------------------------------------------------------

@scenario("spectrum")
def run_spectrum(params, jobs):
    from .gauge import SystemConfig, build_h_alpha
    mat = _material_from_block(_require(params, "material", dict))
    delta = float(params.get("delta", 1.0))
    n_fock = int(params.get("n_fock", 0))
    k = int(params.get("levels_out", 10))
    etas = [float(e) for e in _require(params, "eta")]
    alphas = [_alpha_value(a, delta) for a in params.get("alpha", [1.0])]
    points = [(eta, al) for eta in etas for al in alphas]

    def one(point):
        eta, al = point
        cfg = SystemConfig(mat, eta=eta, delta=delta, alpha=al, n_fock=n_fock)
        w = np.linalg.eigvalsh(build_h_alpha(cfg).data)
        return [eta, al] + list(w[:k])

    rows = _pmap(one, points, jobs)
    cols = ["eta", "alpha"] + [f"E{i}" for i in range(k)]
    return cols, rows, {"material_mu": mat.mu, "n_fock": n_fock or "auto"}


@scenario("photons", figure="ground-state photon number vs coupling (Figs. 6-7)")
def run_photons(params, jobs):
    from .gauge import SystemConfig, ground_photons
    mat = _material_from_block(_require(params, "material", dict))
    delta = float(params.get("delta", 1.0))
    etas = [float(e) for e in _require(params, "eta")]
    alphas = params.get("alpha", [0.0, 1.0, "jc"])

    def one(eta):
        row = [eta]
        for a in alphas:
            al = _alpha_value(a, delta)
            cfg = SystemConfig(mat, eta=eta, delta=delta, alpha=al)
            row.append(ground_photons(cfg) if eta > 0 else 0.0)
        return row

    rows = _pmap(one, etas, jobs)
    cols = ["eta"] + [f"N_alpha_{a}" for a in alphas]
    from .gauge import default_n_fock
    n_fock_max = default_n_fock(max(etas)) if etas else 0
    grid = "n/a"
    if mat.model is not None:
        lo, hi, n = mat.model.grid
        grid = f"({float(lo):.6g}, {float(hi):.6g}, {int(n)})"
    return cols, rows, {"material_mu": mat.mu, "delta": delta,
                        "material_levels": len(mat.levels),
                        "n_fock_max": n_fock_max, "material_grid": grid}


@scenario("truncation-compare", figure="two-level transition errors (Figs. 4-5)")
def run_truncation(params, jobs):
    from .twolevel import transition_error_scan
    mat = _material_from_block(_require(params, "material", dict))
    delta = float(params.get("delta", 1.0))
    etas = [float(e) for e in _require(params, "eta")]
    alphas = [_alpha_value(a, delta) for a in params.get("alpha", [0.0, 1.0])]
    models = params.get("models", ["standard"])
    k = int(params.get("transitions", 2))
    res = transition_error_scan(mat, alphas, etas, delta=delta, k=k, models=models)
    rows = [[m, al, eta] + list(errs)
            for (m, al, eta), errs in sorted(res.items())]
    cols = ["model", "alpha", "eta"] + [f"rel_err_T{i+1}" for i in range(k)]
    return cols, rows, {"material_mu": mat.mu}


@scenario("switch", figure="photon number under a switched coupling")
def run_switch(params, jobs):
    from .gauge import SystemConfig, evolve_switched, gaussian_envelope, \
        raised_cosine_envelope
    mat = _material_from_block(_require(params, "material", dict))
    delta = float(params.get("delta", 1.0))
    eta = float(_require(params, "eta"))
    alphas = [_alpha_value(a, delta) for a in params.get("alpha", [0.0, 1.0])]
    t_final = float(params.get("t_final", 20.0))
    n_t = int(params.get("n_times", 81))
    kind = params.get("envelope", "gaussian")
    if kind == "gaussian":
        env = gaussian_envelope(t_final / 2, t_final / 10)
    elif kind == "raised-cosine":
        env = raised_cosine_envelope(0.0, t_final)
    else:
        raise ConfigError(f"unknown envelope {kind!r}")
    t_grid = np.linspace(0.0, t_final, n_t)
    cfg = SystemConfig(mat, eta=eta, delta=delta, alpha=alphas[0],
                       n_fock=int(params.get("n_fock", 0)))

    def one(al):
        return evolve_switched(cfg, al, env, t_grid).values

    series = _pmap(one, alphas, jobs)
    rows = [[t] + [s[i] for s in series] for i, t in enumerate(t_grid)]
    cols = ["t"] + [f"N_alpha_{a}" for a in alphas]
    return cols, rows, {"material_mu": mat.mu, "envelope": env.name}


@scenario("detector-rate", figure="time-averaged detector excitation rate (Fig. 8)")
def run_detector_rate(params, jobs):
    from .multimode import ContinuumSpec, time_averaged_rate
    from .gauge import alpha_jc
    t_avg = float(params.get("omega_m_T", 1e4))
    cutoffs = [float(x) for x in _require(params, "omega_max")]
    gauges = params.get("alpha", [0.0, 1.0, "jc"])

    def one(wm):
        row = [wm]
        for g in gauges:
            prof = (lambda w: alpha_jc(1.0, w)) if g == "jc" else float(g)
            row.append(time_averaged_rate(ContinuumSpec(omega_max=wm), prof, t_avg))
        return row

    rows = _pmap(one, cutoffs, jobs)
    cols = ["omega_max"] + [f"R_alpha_{g}" for g in gauges]
    return cols, rows, {"omega_m_T": t_avg}


@scenario("pvac", figure="vacuum excitation probability vs cutoff")
def run_pvac(params, jobs):
    from .vacuumfield import pvac
    omega_mn = float(params.get("omega_mn", -1.0))
    t = float(params.get("t", 2.0))
    cutoffs = [float(x) for x in _require(params, "omega_max")]

    def one(wm):
        return [wm, pvac("multipolar", omega_mn, t, wm),
                pvac("coulomb", omega_mn, t, wm)]

    rows = _pmap(one, cutoffs, jobs)
    return ["omega_max", "P_multipolar", "P_coulomb"], rows, \
        {"omega_mn": omega_mn, "t": t}


@scenario("energy-density", figure="static energy densities vs distance")
def run_energy_density(params, jobs):
    from .vacuumfield import DipoleData, static_energy_density
    dip = DipoleData.two_level(1.0, float(params.get("d", 1.0)))
    p = int(params.get("initial_level", 0))
    xs = [float(x) for x in _require(params, "x")]
    c = float(params.get("orientation_cos", 0.0))

    def one(x):
        e, m = static_energy_density(dip, p, x, c)
        return [x, e, m]

    rows = _pmap(one, xs, jobs)
    return ["x", "electric", "magnetic"], rows, {"initial_level": p}


@scenario("udot", figure="virtual energy-density transient (Fig. 11)")
def run_udot(params, jobs):
    from .vacuumfield import udot
    ts = np.linspace(float(params.get("t_min", 0.1)), float(params.get("t_max", 10.0)),
                     int(params.get("n_t", 100)))
    xs = np.linspace(float(params.get("x_min", 0.5)), float(params.get("x_max", 12.0)),
                     int(params.get("n_x", 200)))
    rows = [[t, x, udot(t, x)] for t in ts for x in xs]
    return ["t", "x", "udot"], rows, {"grid": "t-major"}


@scenario("cavity-map", figure="intra-cavity field maps (Fig. 12)")
def run_cavity_map(params, jobs):
    from .cavity1d import CavitySpec, field_map_excited, field_map_ground, \
        normalization_value
    spec = CavitySpec(length=float(params.get("length", 1.0)),
                      n_modes=int(params.get("n_modes", 50)),
                      d=float(params.get("d", 1.0)),
                      volume=float(params.get("volume", 1.0)))
    alpha = _alpha_value(params.get("alpha", 1.0), 1.0)
    state = params.get("state", "excited")
    obs = params.get("observable", "OmOp")
    ts = np.linspace(0.0, float(params.get("t_max", spec.length)),
                     int(params.get("n_t", 51)))
    if state == "excited":
        fmap = field_map_excited(spec, alpha, obs, ts)
    else:
        fmap = field_map_ground(spec, alpha, ts, observable=obs)
    norm = normalization_value(spec, alpha, obs) if params.get("normalize", True) else 1.0
    norm = norm if norm != 0 else 1.0
    rows = [[t, x, fmap.values[i, j] / norm]
            for i, t in enumerate(fmap.t) for j, x in enumerate(fmap.x)]
    return ["t", "x", "value"], rows, {"alpha": alpha, "state": state,
                                       "observable": obs, "n_modes": spec.n_modes}


@scenario("pointer", figure="weak-measurement pointer moments")
def run_pointer(params, jobs):
    from .measure import pointer_moments_continuum, PointerSetup
    from .gauge import alpha_jc
    setup = PointerSetup(shift=float(params.get("shift", 1.0)),
                         sigma=float(params.get("sigma", 0.0)),
                         t_pointer=float(params.get("t_pointer", 1.0)))
    gamma = float(params.get("gamma", 1.0 / (6 * np.pi)))
    cutoffs = [float(x) for x in _require(params, "omega_max")]
    gauges = params.get("alpha", [0.0, 1.0, "jc"])

    def one(wm):
        row = [wm]
        for g in gauges:
            prof = (lambda w: alpha_jc(1.0, w)) if g == "jc" else float(g)
            mean, var = pointer_moments_continuum(gamma, prof, wm, setup)
            row += [mean, var]
        return row

    rows = _pmap(one, cutoffs, jobs)
    cols = ["omega_max"]
    for g in gauges:
        cols += [f"mean_alpha_{g}", f"var_alpha_{g}"]
    return cols, rows, {"t_pointer": setup.t_pointer}


@scenario("dicke", figure="Dicke polariton energies and order parameter")
def run_dicke(params, jobs):
    from .dicke import DickeParams, polariton_energies, order_parameter
    taus = [float(x) for x in _require(params, "tau")]
    alphas = [_alpha_value(a, 1.0) for a in params.get("alpha", [0.0, 0.5, 1.0])]
    omega = float(params.get("omega", 1.0))

    def one(point):
        tau, al = point
        p = DickeParams.at_tau(tau, alpha=al, omega=omega)
        phase = "normal" if tau >= 1 else "abnormal"
        em, ep = polariton_energies(p, phase)
        return [tau, al, phase, em, ep, order_parameter(p)]

    points = [(tau, al) for tau in taus for al in alphas]
    rows = _pmap(one, points, jobs)
    cols = ["tau", "alpha", "phase", "E_minus", "E_plus", "order_parameter"]
    return cols, rows, {"omega": omega}


@scenario("master", figure="quantum optical master equation populations")
def run_master(params, jobs):
    from .multimode import build_master_equation
    from . import opalg
    mat = _material_from_block(_require(params, "material", dict))
    n_levels = int(params.get("levels", 4))
    t_final = float(params.get("t_final", 200.0))
    n_t = int(params.get("n_times", 60))
    h, jumps = build_master_equation(mat, n_levels)
    start = np.zeros((n_levels, n_levels), dtype=complex)
    start[n_levels - 1, n_levels - 1] = 1.0
    rho0 = opalg.DensityMatrix((n_levels,), start)
    t_grid = np.linspace(0.0, t_final, n_t)
    states = opalg.lindblad_evolve(h, jumps, rho0, t_grid)
    rows = [[t] + list(np.real(np.diag(s.matrix))) for t, s in zip(t_grid, states)]
    cols = ["t"] + [f"pop_{i}" for i in range(n_levels)]
    return cols, rows, {"material_mu": mat.mu, "levels": n_levels}


# --- driver -------------------------------------------------------------------

def _pmap(fn, points, jobs):
    """Evaluate fn over points with a worker pool; results in sweep order.

    Threads suffice here: the kernels are numpy/LAPACK-bound and release the
    GIL, and every scenario function is pure.
    """
    if jobs <= 1 or len(points) <= 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, points))


def validate_config(config):
    if not isinstance(config, dict):
        raise ConfigError("config root must be a mapping")
    name = _require(config, "scenario", str)
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; "
                          f"known: {', '.join(sorted(SCENARIOS))}")
    params = config.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params must be a mapping")
    out = config.get("output", f"{name}.csv")
    if not isinstance(out, str):
        raise ConfigError("output must be a path string")
    return name, params, out


def run_config(path, out_dir=".", jobs=1):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        config = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config does not parse: {exc}") from exc
    name, params, out = validate_config(config)
    fn, figure = SCENARIOS[name]
    cols, rows, extras = fn(params, jobs)
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    header = [f"gaugeqed {__version__} scenario={name}", f"config_sha256={digest}"]
    if figure:
        header.append(f"figure: {figure}")
    for key, val in extras.items():
        header.append(f"{key}={val}")
    out_path = os.path.join(out_dir, out)
    os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
    write_csv(out_path, cols, rows, header)
    return out_path


def main(argv=None):
    parser = argparse.ArgumentParser(prog="gaugeqed",
                                     description="arbitrary-gauge cavity QED scenarios")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config")
    p_run.add_argument("--jobs", type=int,
                       default=int(os.environ.get("GAUGEQED_JOBS", "1")))
    p_run.add_argument("--out", default=".")
    p_val = sub.add_parser("validate", help="validate a config without running")
    p_val.add_argument("config")
    sub.add_parser("list-scenarios", help="list known scenarios")
    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        for name in sorted(SCENARIOS):
            figure = SCENARIOS[name][1]
            print(f"{name}" + (f"  [{figure}]" if figure else ""))
        return 0
    if args.command == "validate":
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = yaml.safe_load(fh.read())
            validate_config(config)
        except (ConfigError, OSError, yaml.YAMLError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        print("ok")
        return 0
    try:
        out = run_config(args.config, out_dir=args.out, jobs=args.jobs)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
