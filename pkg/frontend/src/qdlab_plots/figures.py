"""Figure builders for the four qdlab result kinds.

Each builder consumes a parsed CsvTable and plots the numbers verbatim —
no smoothing, no recomputation of physics.  The only derived ink is the
least-squares line on the Cesaro log-log panel (annotated with its slope)
and the mobility-edge markers on the spectrum panel, which are read off
the region labels already present in the CSV.
"""

from dataclasses import dataclass, field

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .csvio import CsvTable, read_table  # noqa: E402

# fixed style so output bytes depend only on the data
STYLE = {
    "figure.dpi": 120,
    "figure.figsize": (6.0, 4.0),
    "font.size": 9,
    "font.family": "DejaVu Sans",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "qdlab-plots",
}

SC_COLOR = "#c0c0c0"  # light gray band
PP_COLOR = "#606060"  # dark gray band


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple  # CSV paths; one for every kind implemented so far
    kind: str  # "spectrum" | "cesaro" | "emch_trace" | "ea_scan"
    output: str  # image path; suffix selects png or svg
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {sorted(FIGURE_KINDS)}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def _require(table: CsvTable, names):
    for n in names:
        table.column(n, convert=str)  # raises KeyError with the path


def _spectrum(table: CsvTable, ax, spec: FigureSpec):
    _require(table, ["lambda", "label", "criterion", "participation_ratio"])
    lam = np.array(table.column("lambda"))
    pr = np.array(table.column("participation_ratio"))
    labels = np.array(table.column("label", convert=str))
    for name, color in (("SC", SC_COLOR), ("PP", PP_COLOR)):
        sel = labels == name
        if sel.any():
            ax.scatter(lam[sel], pr[sel], s=6, color=color, label=name,
                       zorder=3)
    sc = lam[labels == "SC"]
    if sc.size:  # mobility edges: outermost eigenvalues still labeled SC
        for edge in (sc.min(), sc.max()):
            ax.axvline(edge, color="k", linestyle="--", linewidth=0.8)
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "energy")
    ax.set_ylabel(spec.ylabel or "participation ratio")
    ax.legend(loc="lower center")


def _cesaro(table: CsvTable, ax, spec: FigureSpec):
    _require(table, ["T", "cesaro_average"])
    T = np.array(table.column("T"))
    val = np.array(table.column("cesaro_average"))
    ax.scatter(T, val, s=12, color="#1f4e79", zorder=3)
    slope, icpt = np.polyfit(np.log(T), np.log(val), 1)
    ax.plot(T, np.exp(icpt) * T**slope, color="#c44e52", linewidth=1.0,
            label=f"slope {slope:.4f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "horizon T")
    ax.set_ylabel(spec.ylabel or "Cesaro average")
    ax.legend()


def _emch_trace(table: CsvTable, ax, spec: FigureSpec):
    _require(table, ["t", "closed_form", "mc_mean", "mc_stderr"])
    t = np.array(table.column("t"))
    closed = np.array(table.column("closed_form"))
    mc = np.array(table.column("mc_mean"))
    err = np.array(table.column("mc_stderr"))
    ax.fill_between(t, mc - 3 * err, mc + 3 * err, color="#9ecae1",
                    alpha=0.6, label="MC 3 sigma")
    ax.plot(t, closed, color="k", linewidth=1.2, label="closed form")
    ax.plot(t, mc, color="#1f4e79", linewidth=0.8, linestyle=":",
            label="MC mean")
    ax.set_xlabel(spec.xlabel or "t")
    ax.set_ylabel(spec.ylabel or "f(t)")
    ax.legend()


def _ea_scan(table: CsvTable, ax, spec: FigureSpec):
    _require(table, ["L", "boundary", "mean_energy_density", "stderr"])
    L = np.array(table.column("L"))
    mean = np.array(table.column("mean_energy_density"))
    err = np.array(table.column("stderr"))
    bc = np.array(table.column("boundary", convert=str))
    for name, color in (("free", "#1f4e79"), ("periodic", "#c44e52")):
        sel = bc == name
        if sel.any():
            ax.errorbar(L[sel], mean[sel], yerr=err[sel], color=color,
                        marker="o", markersize=4, capsize=3, label=name)
    ax.set_xlabel(spec.xlabel or "L")
    ax.set_ylabel(spec.ylabel or "ground-state energy per site")
    ax.legend()


FIGURE_KINDS = {
    "spectrum": _spectrum,
    "cesaro": _cesaro,
    "emch_trace": _emch_trace,
    "ea_scan": _ea_scan,
}


def build_figure(spec: FigureSpec):
    """Figure object for a spec; separated from render for testability."""
    table = read_table(spec.inputs[0])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        FIGURE_KINDS[spec.kind](table, ax, spec)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Write the figure to spec.output; deterministic for fixed inputs."""
    fig = build_figure(spec)
    try:
        # strip run-dependent metadata so identical data gives identical bytes
        if spec.output.endswith(".svg"):
            meta = {"Date": None}
        else:
            meta = {"Software": None}
        fig.savefig(spec.output, metadata=meta)
    finally:
        plt.close(fig)
    return spec.output
