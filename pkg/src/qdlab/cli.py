"""Command-line interface: every experiment writes a CSV result file plus a
JSON manifest recording the full configuration.

Identical configuration and seed produce byte-identical CSV output; the
manifest additionally records wall time and is the only non-reproducible
artifact.  QDLAB_THREADS (or --threads) sizes the worker pool used for
independent disorder realizations.
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import __version__, ensembles, spectral, spin_glass, emch_radin
from . import kronecker as kron2d
from . import sparse_jacobi as sj
from .sparse_jacobi import ResourceBudgetError

EXIT_BAD_CONFIG = 2
EXIT_BUDGET = 3


def _threads(opt):
    if opt:
        return opt
    env = os.environ.get("QDLAB_THREADS")
    return int(env) if env else (os.cpu_count() or 1)


def parallel_map(fn, items, threads):
    """Order-preserving map over independent work items."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path, header_lines, columns, rows):
    """CSV with '#' comment header, LF endings, '.' decimal separator."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_manifest(path, config, started):
    payload = {
        "version": __version__,
        "config": config,
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _run(out, config, header, columns, rows):
    write_csv(out + ".csv", header, columns, rows)
    write_manifest(out + ".manifest.json", config, config.pop("_started"))
    click.echo(f"wrote {out}.csv")


class Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ResourceBudgetError as exc:
            click.echo(f"error: resource budget: {exc}", err=True)
            ctx.exit(EXIT_BUDGET)
        except (ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(EXIT_BAD_CONFIG)


@click.group(cls=Cli)
def main():
    """Numerical laboratory for sparse operators, spin glasses, and
    disordered transverse-magnetization dynamics."""


def _common(f):
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--out", default="qdlab-run", show_default=True,
                     help="output path prefix")(f)
    f = click.option("--threads", type=int, default=0,
                     help="worker pool size (default: QDLAB_THREADS or cores)")(f)
    return f


# --- sparse operator -------------------------------------------------------

@main.command()
@click.option("--beta", type=int, required=True, help="sparseness base")
@click.option("--v", type=float, required=True, help="bump strength")
@click.option("--phi", type=float, default=0.0, show_default=True)
@click.option("--n", type=int, default=2000, show_default=True,
              help="truncation size")
@click.option("--bumps", type=int, default=30, show_default=True)
@_common
def spectrum(beta, v, phi, n, bumps, seed, out, threads):
    """Truncated spectrum with region labels and participation ratios."""
    started = time.monotonic()
    params = sj.SparseModelParams(beta, v, phi, bumps, seed)
    pot = sj.build_potential(params)
    evals, evecs = sj.truncated_spectrum(pot, n, phi)
    pr = sj.participation_ratio(evecs)
    rows = []
    for lam, p in zip(evals, pr):
        lam_c = float(np.clip(lam, -2.0, 2.0))
        cls = sj.classify_energy(lam_c, params)
        rows.append((float(lam), cls.label, float(cls.criterion_value), float(p)))
    config = dict(cmd="spectrum", beta=beta, v=v, phi=phi, n=n, bumps=bumps,
                  seed=seed, _started=started)
    _run(out, config,
         ["truncated sparse-operator spectrum",
          f"beta={beta} v={v} phi={phi} n={n} bumps={bumps} seed={seed}",
          "columns: eigenvalue, region label, criterion value, participation ratio"],
         ["lambda", "label", "criterion", "participation_ratio"], rows)


@main.command()
@click.option("--beta", type=int, required=True)
@click.option("--v", type=float, required=True)
@click.option("--energy", "lam", type=float, default=0.0, show_default=True)
@click.option("--bumps", type=int, default=20, show_default=True)
@_common
def prufer(beta, v, lam, bumps, seed, out, threads):
    """Transfer-cocycle radius and phase at each bump."""
    started = time.monotonic()
    params = sj.SparseModelParams(beta, v, 0.0, bumps, seed)
    pot = sj.build_potential(params)
    traj = sj.prufer_evolve(lam, pot)
    rows = [(j + 1, pos, float(r), float(ph))
            for j, (pos, r, ph) in enumerate(zip(pot.positions, traj.radii,
                                                 traj.phases))]
    config = dict(cmd="prufer", beta=beta, v=v, energy=lam, bumps=bumps,
                  seed=seed, _started=started)
    _run(out, config,
         ["polar transfer-cocycle data at the bump positions",
          f"beta={beta} v={v} energy={lam} bumps={bumps} seed={seed}",
          "columns: bump index, site, radius, phase"],
         ["bump", "site", "radius", "phase"], rows)


@main.command()
@click.option("--depth", type=int, default=10, show_default=True,
              help="Cantor truncation depth")
@click.option("--tmin", type=float, default=10.0, show_default=True)
@click.option("--tmax", type=float, default=3000.0, show_default=True)
@click.option("--points", type=int, default=25, show_default=True)
@_common
def cesaro(depth, tmin, tmax, points, seed, out, threads):
    """Cesaro time averages of the Cantor-measure transform with a decay fit."""
    started = time.monotonic()
    mu = spectral.cantor_measure(depth)
    horizons = np.geomspace(tmin, tmax, points)
    values = parallel_map(lambda T: spectral.cesaro_average(mu, T),
                          list(horizons), _threads(threads))
    series = spectral.CesaroSeries(horizons, np.array(values))
    exponent = spectral.fit_decay_exponent(series)
    rows = [(float(T), float(val)) for T, val in zip(horizons, values)]
    config = dict(cmd="cesaro", depth=depth, tmin=tmin, tmax=tmax,
                  points=points, seed=seed, _started=started)
    _run(out, config,
         ["Cesaro average of |transform|^2 for the truncated Cantor measure",
          f"depth={depth} fitted decay exponent={exponent:.6f} "
          f"(target {spectral.CANTOR_DIMENSION:.6f})",
          "columns: horizon T, Cesaro average"],
         ["T", "cesaro_average"], rows)


@main.command()
@click.option("--depth", type=int, default=60, show_default=True)
@click.option("--umax", type=float, default=100.0, show_default=True)
@click.option("--points", type=int, default=400, show_default=True)
@_common
def cantor(depth, umax, points, seed, out, threads):
    """Cantor-measure transform on a frequency grid."""
    started = time.monotonic()
    u = np.linspace(0.0, umax, points)
    vals = spectral.cantor_transform(u, depth)
    rows = [(float(x), float(g)) for x, g in zip(u, vals)]
    config = dict(cmd="cantor", depth=depth, umax=umax, points=points,
                  seed=seed, _started=started)
    _run(out, config,
         ["Fourier-Stieltjes transform of the middle-thirds Cantor measure",
          f"depth={depth}",
          "columns: frequency u, transform value"],
         ["u", "transform"], rows)


@main.command()
@click.option("--beta", type=int, required=True)
@click.option("--v", type=float, required=True)
@click.option("--theta", type=float, default=0.5, show_default=True)
@_common
def kronecker(beta, v, theta, seed, out, threads):
    """Spectral window report for the separable two-dimensional operator."""
    started = time.monotonic()
    rep = kron2d.theorem2_windows(v, beta, theta)
    rows = [("band", rep.band[0], rep.band[1])]
    for k, iv in enumerate(rep.pp_region):
        rows.append((f"pp_{k}", iv[0], iv[1]))
    if rep.ac_candidate:
        rows.append(("ac_candidate", rep.ac_candidate[0], rep.ac_candidate[1]))
    rows.append(("hypothesis_ok", float(rep.hypothesis_ok), float(rep.hypothesis_ok)))
    rows.append(("sc_unknown", float(rep.sc_unknown), float(rep.sc_unknown)))
    config = dict(cmd="kronecker", beta=beta, v=v, theta=theta, seed=seed,
                  _started=started)
    _run(out, config,
         ["spectral windows of the separable 2-d operator",
          f"beta={beta} v={v} theta={theta}",
          "columns: window name, left endpoint, right endpoint"],
         ["window", "left", "right"], rows)


# --- spin glass ------------------------------------------------------------

@main.group()
def ea():
    """Edwards-Anderson spin-glass experiments."""


@ea.command("ground-state")
@click.option("--d", "dimension", type=int, required=True)
@click.option("--length", "-l", "side", type=int, required=True)
@click.option("--boundary", type=click.Choice(["free", "periodic"]),
              default="free", show_default=True)
@click.option("--dist", default="bernoulli", show_default=True)
@_common
def ea_ground_state(dimension, side, boundary, dist, seed, out, threads):
    """Exact classical ground state of one disorder realization."""
    started = time.monotonic()
    inst = spin_glass.random_instance(dimension, side, boundary,
                                      ensembles.from_name(dist), seed)
    gs = spin_glass.ground_state_exhaustive(inst)
    rows = [(gs.energy, gs.energy / inst.n_sites, gs.degeneracy,
             gs.degeneracy_mod_flip)]
    config = dict(cmd="ea ground-state", d=dimension, L=side,
                  boundary=boundary, dist=dist, seed=seed, _started=started)
    _run(out, config,
         ["exact classical ground state, one realization",
          f"d={dimension} L={side} boundary={boundary} dist={dist} seed={seed}",
          "columns: energy, energy per site, degeneracy (raw), degeneracy mod flip"],
         ["energy", "energy_per_site", "degeneracy", "degeneracy_mod_flip"], rows)


@ea.command("cluster-bound")
@click.option("--d", "dimension", type=int, required=True)
@click.option("--dist", default="bernoulli", show_default=True)
@click.option("--samples", type=int, default=20000, show_default=True,
              help="Monte Carlo samples for continuous couplings")
@_common
def ea_cluster_bound(dimension, dist, samples, seed, out, threads):
    """Finite-size-cluster lower bound on the energy density."""
    started = time.monotonic()
    cb = spin_glass.cluster_lower_bound(dimension, ensembles.from_name(dist),
                                        n_samples=samples, seed=seed)
    bound = cb.per_site_bound
    rows = [(str(bound) if cb.exact else f"{bound:.17g}",
             float(bound), float(cb.stderr), int(cb.exact))]
    config = dict(cmd="ea cluster-bound", d=dimension, dist=dist,
                  samples=samples, seed=seed, _started=started)
    _run(out, config,
         ["finite-size-cluster lower bound on the ground-state energy density",
          f"d={dimension} dist={dist}",
          "columns: bound (rational if exact), decimal value, stderr, exact flag"],
         ["bound_rational", "bound_decimal", "stderr", "exact"], rows)


@ea.command("scan")
@click.option("--d", "dimension", type=int, required=True)
@click.option("--sizes", default="2,3,4", show_default=True)
@click.option("--samples", type=int, default=100, show_default=True)
@click.option("--dist", default="bernoulli", show_default=True)
@_common
def ea_scan(dimension, sizes, samples, dist, seed, out, threads):
    """Disorder-averaged energy density across lattice sizes."""
    started = time.monotonic()
    L_list = [int(s) for s in sizes.split(",")]
    table = spin_glass.energy_density_scan(dimension, L_list, samples,
                                           ensembles.from_name(dist), seed)
    rows = [(r["L"], r["boundary"], r["samples"], r["mean_energy_density"],
             r["stderr"]) for r in table]
    config = dict(cmd="ea scan", d=dimension, sizes=sizes, samples=samples,
                  dist=dist, seed=seed, _started=started)
    _run(out, config,
         ["ground-state energy density vs lattice size and boundary condition",
          f"d={dimension} dist={dist} samples={samples} seed={seed}",
          "columns: L, boundary, samples, mean energy density, stderr"],
         ["L", "boundary", "samples", "mean_energy_density", "stderr"], rows)


# --- Emch-Radin dynamics ---------------------------------------------------

@main.group()
def emch():
    """Disordered transverse-magnetization dynamics."""


def _emch_model(dimension, beta, gamma, dist, n=1):
    kernel = emch_radin.nearest_neighbor_kernel(dimension, beta)
    return emch_radin.DisorderedEmchModel(kernel, ensembles.from_name(dist),
                                          beta, gamma, n)


@emch.command("trace")
@click.option("--dist", default="bernoulli", show_default=True)
@click.option("--z", type=int, default=4, show_default=True,
              help="coordination number (2d)")
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--tmax", type=float, default=10.0, show_default=True)
@click.option("--points", type=int, default=100, show_default=True)
@click.option("--samples", type=int, default=100000, show_default=True)
@_common
def emch_trace(dist, z, beta, gamma, tmax, points, samples, seed, out, threads):
    """Closed-form and Monte Carlo disorder-averaged magnetization."""
    started = time.monotonic()
    if z % 2:
        raise ValueError("coordination z must be even (z = 2d)")
    model = _emch_model(z // 2, beta, gamma, dist)
    t = np.linspace(0.0, tmax, points)
    closed = model.delta * emch_radin.closed_form_f(model.distribution, z,
                                                    beta, t)
    trace = emch_radin.mc_average_f(model, t, samples, seed)
    rows = [(float(a), float(b), float(c), float(e))
            for a, b, c, e in zip(t, closed, trace.values, trace.stderr)]
    config = dict(cmd="emch trace", dist=dist, z=z, beta=beta, gamma=gamma,
                  tmax=tmax, points=points, samples=samples, seed=seed,
                  _started=started)
    _run(out, config,
         ["disorder-averaged transverse magnetization",
          f"dist={dist} z={z} beta={beta} gamma={gamma} samples={samples} seed={seed}",
          "columns: t, closed form, Monte Carlo mean, Monte Carlo stderr"],
         ["t", "closed_form", "mc_mean", "mc_stderr"], rows)


@emch.command("exact")
@click.option("--d", "dimension", type=int, default=1, show_default=True)
@click.option("--half-width", "n", type=int, default=2, show_default=True)
@click.option("--dist", default="bernoulli", show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--tmax", type=float, default=5.0, show_default=True)
@click.option("--points", type=int, default=50, show_default=True)
@_common
def emch_exact(dimension, n, dist, beta, gamma, tmax, points, seed, out, threads):
    """Dense unitary evolution against the analytic product formula."""
    started = time.monotonic()
    model = _emch_model(dimension, beta, gamma, dist, n)
    couplings = emch_radin.sample_couplings(model, seed)
    t = np.linspace(0.0, tmax, points)
    dense = emch_radin.exact_magnetization(model, couplings, t)
    product = emch_radin.product_formula(model, couplings, t)
    rows = [(float(a), float(b), float(c), float(abs(b - c)))
            for a, b, c in zip(t, dense, product)]
    config = dict(cmd="emch exact", d=dimension, half_width=n, dist=dist,
                  beta=beta, gamma=gamma, tmax=tmax, points=points,
                  seed=seed, _started=started)
    _run(out, config,
         ["dense finite-volume evolution vs analytic product formula",
          f"d={dimension} half_width={n} dist={dist} beta={beta} gamma={gamma} seed={seed}",
          "columns: t, dense evolution, product formula, absolute difference"],
         ["t", "dense", "product", "abs_diff"], rows)


@emch.command("stability")
@click.option("--kernel", "kernel_kind", type=click.Choice(["nn", "power"]),
              default="nn", show_default=True)
@click.option("--d", "dimension", type=int, default=1, show_default=True)
@click.option("--exponent", type=float, default=0.75, show_default=True,
              help="decay exponent for the power-law kernel")
@click.option("--dist", default="bernoulli", show_default=True)
@_common
def emch_stability(kernel_kind, dimension, exponent, dist, seed, out, threads):
    """Thermodynamic stability flags for a kernel/coupling pair."""
    started = time.monotonic()
    if kernel_kind == "nn":
        kernel = emch_radin.nearest_neighbor_kernel(dimension, 1.0)
    else:
        kernel = emch_radin.power_law_kernel(dimension, exponent)
    rep = emch_radin.stability_classify(kernel, ensembles.from_name(dist))
    rows = [(int(rep.stable), int(rep.first_kind), int(rep.second_kind),
             int(rep.no_exponential_decay), rep.summability_class,
             rep.rationale)]
    config = dict(cmd="emch stability", kernel=kernel_kind, d=dimension,
                  exponent=exponent, dist=dist, seed=seed, _started=started)
    _run(out, config,
         ["thermodynamic stability classification",
          f"kernel={kernel_kind} d={dimension} dist={dist}",
          "columns: stable, first kind, second kind, no exponential decay, "
          "summability class, rationale"],
         ["stable", "first_kind", "second_kind", "no_exponential_decay",
          "summability", "rationale"], rows)


# --- ensembles -------------------------------------------------------------

@main.group()
def ensemble():
    """Coupling-distribution diagnostics."""


@ensemble.command("check")
@click.option("--dist", default="bernoulli", show_default=True)
@click.option("--draws", type=int, default=100000, show_default=True)
@_common
def ensemble_check(dist, draws, seed, out, threads):
    """Sampled vs analytic moments and the factorial moment bound."""
    started = time.monotonic()
    d = ensembles.from_name(dist)
    from .streams import substream
    x = ensembles.sample(d, substream(seed, "ensemble-check", 0), size=draws)
    c = ensembles.moment_bound_check(d, 12)
    rows = []
    for n in (1, 2, 3, 4):
        rows.append((n, float(np.mean(x**n)), float(ensembles._abs_moment(d, n)
                                                    if n % 2 == 0 else 0.0)))
    rows.append(("moment_bound_c", float(c), float(c)))
    config = dict(cmd="ensemble check", dist=dist, draws=draws, seed=seed,
                  _started=started)
    _run(out, config,
         ["sampled moments against closed forms",
          f"dist={dist} draws={draws} seed={seed}",
          "columns: moment order (or diagnostic), sampled value, analytic value"],
         ["n", "sampled", "analytic"], rows)


if __name__ == "__main__":
    main()
