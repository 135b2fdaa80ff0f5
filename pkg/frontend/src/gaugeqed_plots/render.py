"""Render gaugeqed CSV datasets into figure files.

One PlotSpec per CLI scenario: line plots for sweeps (log-log where the
underlying quantity diverges with the cutoff), heatmaps for (t, x) maps.
Rendering is read-only and deterministic: identical CSV input produces
byte-identical image files.
"""

from dataclasses import dataclass
import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "gaugeqed-plots"

import matplotlib.pyplot as plt
import numpy as np


class RenderError(Exception):
    pass


@dataclass(frozen=True)
class PlotSpec:
    scenario: str
    kind: str = "line"            # 'line' | 'heatmap'
    x: str = ""
    xlabel: str = ""
    ylabel: str = ""
    xscale: str = "linear"
    yscale: str = "linear"
    group_by: tuple = ()          # series-label columns for long-format data
    y: str = ""                   # value column for grouped/heatmap data
    output: str = ""


SPECS = {
    "spectrum": PlotSpec("spectrum", x="eta", xlabel="eta",
                         ylabel="energy (omega_m)", group_by=("alpha",),
                         output="spectrum.png"),
    "photons": PlotSpec("photons", x="eta", xlabel="eta",
                        ylabel="ground-state photons", output="photons.png"),
    "truncation-compare": PlotSpec("truncation-compare", x="eta", xlabel="eta",
                                   ylabel="relative transition error",
                                   yscale="log", group_by=("model", "alpha"),
                                   y="rel_err_T1", output="truncation.png"),
    "switch": PlotSpec("switch", x="t", xlabel="omega_m t",
                       ylabel="photon number", output="switch.png"),
    "detector-rate": PlotSpec("detector-rate", x="omega_max",
                              xlabel="omega_max/omega_m", ylabel="rate (Gamma)",
                              xscale="log", yscale="log",
                              output="detector_rate.png"),
    "pvac": PlotSpec("pvac", x="omega_max", xlabel="omega_max/omega_m",
                     ylabel="excitation probability", xscale="log",
                     yscale="log", output="pvac.png"),
    "energy-density": PlotSpec("energy-density", x="x",
                               xlabel="omega_m x", ylabel="energy density",
                               xscale="log", yscale="log",
                               output="energy_density.png"),
    "udot": PlotSpec("udot", kind="heatmap", x="t", y="udot",
                     xlabel="omega_m x", ylabel="omega_m t",
                     output="udot.png"),
    "cavity-map": PlotSpec("cavity-map", kind="heatmap", x="t", y="value",
                           xlabel="x/L", ylabel="t/L", output="cavity_map.png"),
    "pointer": PlotSpec("pointer", x="omega_max", xlabel="omega_max/omega_m",
                        ylabel="pointer moment", xscale="log",
                        output="pointer.png"),
    "dicke": PlotSpec("dicke", x="tau", xlabel="tau",
                      ylabel="polariton energy / order parameter",
                      group_by=("alpha",), output="dicke.png"),
    "master": PlotSpec("master", x="t", xlabel="t (1/omega_m)",
                       ylabel="population", output="master.png"),
}


def read_csv(path):
    """(scenario, columns, string rows, header comment lines)."""
    header = []
    columns = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                header.append(line[1:].strip())
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    if columns is None:
        raise RenderError(f"{path}: no column header found")
    scenario = None
    for item in header:
        for tok in item.split():
            if tok.startswith("scenario="):
                scenario = tok.split("=", 1)[1]
    return scenario, columns, rows, header


def _column(columns, rows, name):
    if name not in columns:
        raise RenderError(f"missing column {name!r}; have {columns}")
    i = columns.index(name)
    return [r[i] for r in rows]


def _float_column(columns, rows, name):
    return np.array([float(v) for v in _column(columns, rows, name)])


def _numeric_columns(columns, rows, skip):
    out = []
    for name in columns:
        if name in skip:
            continue
        try:
            out.append((name, _float_column(columns, rows, name)))
        except ValueError:
            continue
    return out


def _render_lines(ax, spec, columns, rows):
    xs = _float_column(columns, rows, spec.x)
    if spec.group_by:
        keys = [tuple(_column(columns, rows, g)[i] for g in spec.group_by)
                for i in range(len(rows))]
        y_cols = [spec.y] if spec.y else \
            [n for n, _ in _numeric_columns(columns, rows,
                                            set(spec.group_by) | {spec.x})]
        for key in sorted(set(keys)):
            sel = np.array([k == key for k in keys])
            order = np.argsort(xs[sel])
            label = ",".join(f"{g}={v}" for g, v in zip(spec.group_by, key))
            for y_name in y_cols:
                ys = _float_column(columns, rows, y_name)
                suffix = f" {y_name}" if len(y_cols) > 1 else ""
                ax.plot(xs[sel][order], ys[sel][order], marker="o",
                        label=label + suffix)
    else:
        for name, ys in _numeric_columns(columns, rows, {spec.x}):
            order = np.argsort(xs)
            ax.plot(xs[order], ys[order], marker="o", label=name)
    if spec.yscale == "log":
        ax.set_yscale("log")
    if spec.xscale == "log":
        ax.set_xscale("log")
    ax.legend(fontsize=7)


def _render_heatmap(fig, ax, spec, columns, rows):
    ts = _float_column(columns, rows, "t")
    xs = _float_column(columns, rows, "x")
    vals = _float_column(columns, rows, spec.y)
    t_axis = np.unique(ts)
    x_axis = np.unique(xs)
    grid = np.full((len(t_axis), len(x_axis)), np.nan)
    t_idx = {v: i for i, v in enumerate(t_axis)}
    x_idx = {v: i for i, v in enumerate(x_axis)}
    for t, x, v in zip(ts, xs, vals):
        grid[t_idx[t], x_idx[x]] = v
    mesh = ax.pcolormesh(x_axis, t_axis, grid, cmap="viridis", shading="auto")
    fig.colorbar(mesh, ax=ax)


def render(csv_path, spec_name=None, out=None):
    """Render a CLI-produced CSV to an image file; returns the output path."""
    scenario, columns, rows, header = read_csv(csv_path)
    if not rows:
        raise RenderError(f"{csv_path}: no data rows, refusing to render")
    name = spec_name or scenario
    if name is None:
        raise RenderError(f"{csv_path}: no scenario header; pass --spec")
    if name not in SPECS:
        raise RenderError(f"no plot spec for scenario {name!r}")
    spec = SPECS[name]
    out = out or spec.output

    fig, ax = plt.subplots(figsize=(5.4, 3.8), dpi=120)
    if spec.kind == "heatmap":
        _render_heatmap(fig, ax, spec, columns, rows)
    else:
        _render_lines(ax, spec, columns, rows)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    title = next((h for h in header if h.startswith("figure:")), name)
    ax.set_title(title.replace("figure:", "").strip(), fontsize=8)
    fig.tight_layout()
    fig.savefig(out, metadata=_deterministic_metadata(out))
    plt.close(fig)
    return out


def _deterministic_metadata(out):
    if out.endswith(".svg"):
        return {"Date": None}
    if out.endswith(".png"):
        return {"Software": "gaugeqed-plots"}
    return None
