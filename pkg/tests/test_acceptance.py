"""Acceptance suite: one test per headline criterion, each printing an
explicit PASS/FAIL line (run with -s to see them alongside the pytest dots).
Every tolerance is stated inline next to the check it guards."""

import math
import time
from fractions import Fraction

import numpy as np
from click.testing import CliRunner

from qdlab import emch_radin as er
from qdlab import ensembles, kronecker, spectral, spin_glass
from qdlab import sparse_jacobi as sj
from qdlab.cli import main as cli_main
from qdlab.ensembles import BERNOULLI, GAUSSIAN, UNIFORM
from qdlab.spectral import AtomicMeasure, CesaroSeries
from qdlab.streams import substream


def _report(name, ok):
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, name


def test_cluster_bounds_exact():
    # exact rational bounds in < 1 s each
    t0 = time.perf_counter()
    cb2 = spin_glass.cluster_lower_bound(2, BERNOULLI)
    t2 = time.perf_counter() - t0
    t0 = time.perf_counter()
    cb3 = spin_glass.cluster_lower_bound(3, BERNOULLI)
    t3 = time.perf_counter() - t0
    ok = (cb2.exact and cb2.per_site_bound == Fraction(-3, 2)
          and cb3.exact and cb3.per_site_bound == Fraction(-36096, 16384)
          and float(cb3.per_site_bound) == -2.203125
          and t2 < 1.0 and t3 < 1.0)
    _report("cluster bounds d=2 (-3/2) and d=3 (-36096/16384), < 1 s each", ok)


def test_misfit_exact():
    ok = (spin_glass.misfit(2.0, 1.5) == 0.25
          and spin_glass.misfit(3.0, 2.203125) == 0.265625)
    _report("misfit values 0.25 and 0.265625 exact", ok)


def test_product_formula_structure():
    # >= 20 random instances with <= 12 spins: dense unitary evolution vs
    # analytic product formula to 1e-10 on a 50-point grid, < 1 min total
    t0 = time.perf_counter()
    t = np.linspace(0.0, 6.0, 50)
    worst = 0.0
    cases = 0
    for dist in (BERNOULLI, UNIFORM, GAUSSIAN):
        for idx in range(7):
            if idx < 5:
                model = er.DisorderedEmchModel(
                    er.nearest_neighbor_kernel(1, 0.5 + 0.1 * idx),
                    dist, 0.5 + 0.1 * idx, 0.3 + 0.2 * idx, 2)  # 5 spins
            else:
                model = er.DisorderedEmchModel(
                    er.nearest_neighbor_kernel(2, 1.0), dist, 1.0, 1.0, 1)  # 9
            couplings = er.sample_couplings(model, seed=idx, index=idx)
            dense = er.exact_magnetization(model, couplings, t)
            prod = er.product_formula(model, couplings, t)
            worst = max(worst, float(np.max(np.abs(dense - prod))))
            cases += 1
    elapsed = time.perf_counter() - t0
    ok = cases >= 20 and worst < 1e-10 and elapsed < 60.0
    _report(f"dense evolution vs product formula, {cases} instances, "
            f"max gap {worst:.2e} < 1e-10, {elapsed:.1f} s < 60 s", ok)


def test_disorder_average_cross_validation():
    # for each ensemble: MC with 1e5 samples within 3 stderr of the closed
    # form at every point of a 100-point grid over [0, 10], and the decay
    # classifier returns the expected label
    t = np.linspace(0.0, 10.0, 100)
    labels = {BERNOULLI: "ALMOST_PERIODIC", UNIFORM: "POWER_LAW",
              GAUSSIAN: "GAUSSIAN_LIKE"}
    ok = True
    for dist, expect in labels.items():
        model = er.DisorderedEmchModel(er.nearest_neighbor_kernel(2, 1.0),
                                       dist, 1.0, 1.0, 1)
        trace = er.mc_average_f(model, t, 100_000, seed=17)
        closed = model.delta * er.closed_form_f(dist, 4, 1.0, t)
        gap = np.abs(trace.values - closed)
        within = bool(np.all(gap <= 3.0 * trace.stderr + 1e-14))
        closed_trace = er.MagnetizationTrace(
            t, er.closed_form_f(dist, 4, 1.0, t), np.zeros(t.size))
        label_ok = er.decay_classify(closed_trace) == expect
        ok = ok and within and label_ok
    _report("MC vs closed form within 3 stderr on 100-point grid, "
            "decay labels ALMOST_PERIODIC / POWER_LAW / GAUSSIAN_LIKE", ok)


def test_cantor_oracle():
    # scaling identity to 1e-12 for n = 1..100 at depth 60, and the fitted
    # Cesaro decay exponent within 0.05 of log2/log3
    worst = max(abs(spectral.cantor_transform(3 * n, 60)
                    - spectral.cantor_transform(n, 60))
                for n in range(1, 101))
    mu = spectral.cantor_measure(10)
    horizons = np.geomspace(10.0, 3000.0, 25)
    vals = np.array([spectral.cesaro_average(mu, T) for T in horizons])
    expo = spectral.fit_decay_exponent(CesaroSeries(horizons, vals))
    ok = worst < 1e-12 and abs(expo - spectral.CANTOR_DIMENSION) < 0.05
    _report(f"Cantor scaling identity max gap {worst:.2e} < 1e-12, "
            f"Cesaro exponent {expo:.4f} = log2/log3 +- 0.05", ok)


def test_criterion_consistency():
    # classification boundary vs closed-form mobility edges to 1e-12 over
    # 10^3 (v, beta, lambda) triples; exact radius constancy on bump-free
    # stretches to 1e-12; Prufer vs direct cocycles to 1e-9
    rng = substream(0, "acceptance-triples", 0)
    worst_crit = 0.0
    ok_labels = True
    for _ in range(1000):
        beta = int(rng.integers(2, 7))
        v = float(rng.uniform(0.1, 0.999))
        params = sj.SparseModelParams(beta, v)
        lo, hi = sj.mobility_edges(v, beta)
        edge = hi if rng.random() < 0.5 else lo
        cls = sj.classify_energy(edge, params)
        worst_crit = max(worst_crit, abs(cls.criterion_value - 1.0))
        inner = sj.classify_energy(edge * 0.999, params)
        outer = sj.classify_energy(float(np.clip(edge * 1.001, -2, 2)), params)
        ok_labels = ok_labels and inner.label == "SC" and outer.label == "PP"

    # radius constancy: free rotation preserves the elliptic radius exactly
    worst_radius = 0.0
    for lam in np.linspace(-1.9, 1.9, 21):
        alpha = math.acos(lam / 2.0)
        Q, _ = sj._elliptic_change_of_basis(alpha)
        w = Q @ np.array([math.cos(0.3), math.sin(0.3)])
        r0 = math.hypot(*w)
        for k in (1, 7, 100, 5000):
            wk = sj._rotation(alpha * k) @ w
            worst_radius = max(worst_radius, abs(math.hypot(*wk) - r0))

    worst_cocycle = 0.0
    for seed in range(5):
        params = sj.SparseModelParams(2, 0.5, 0.0, 12, seed)
        pot = sj.build_potential(params)
        for lam in (-1.5, -0.4, 0.0, 0.9, 1.7):
            M = sj.transfer_cocycle(lam, pot)
            P = sj.prufer_cocycle(lam, pot)
            worst_cocycle = max(
                worst_cocycle,
                float(np.max(np.abs(P - M)) / max(1.0, np.abs(M).max())))
    ok = (worst_crit < 1e-12 and ok_labels and worst_radius < 1e-12
          and worst_cocycle < 1e-9)
    _report(f"criterion at mobility edges off by {worst_crit:.2e} < 1e-12, "
            f"radius drift {worst_radius:.2e} < 1e-12, "
            f"cocycle gap {worst_cocycle:.2e} < 1e-9", ok)


def test_localization_signature():
    # beta=2, v=0.9, n=2000, 10 realizations: the median participation ratio
    # of boundary-coupled eigenvectors in the PP window is at least 5x below
    # the SC window median.  The bump array ends near site 1000, so states
    # supported only in the bump-free tail are effectively free at every
    # energy; weighting by the boundary component |psi(0)|^2 > 1/n keeps the
    # states that carry the spectral measure of delta_0.  Runtime < 2 min.
    t0 = time.perf_counter()
    n = 2000
    pr_by_label = {"SC": [], "PP": []}
    for seed in range(10):
        params = sj.SparseModelParams(2, 0.9, 0.0, 30, seed)
        pot = sj.build_potential(params)
        evals, evecs = sj.truncated_spectrum(pot, n)
        pr = sj.participation_ratio(evecs)
        boundary = evecs[0, :] ** 2 > 1.0 / n
        for lam, p, keep in zip(evals, pr, boundary):
            if not keep or not -2.0 <= lam <= 2.0:
                continue
            label = sj.classify_energy(lam, params).label
            if label in pr_by_label:
                pr_by_label[label].append(p)
    med_pp = float(np.median(pr_by_label["PP"]))
    med_sc = float(np.median(pr_by_label["SC"]))
    elapsed = time.perf_counter() - t0
    ok = med_sc >= 5.0 * med_pp and elapsed < 120.0
    _report(f"localization contrast: SC median PR {med_sc:.1f} >= 5x "
            f"PP median PR {med_pp:.1f}, {elapsed:.1f} s < 120 s", ok)


def test_l2_separation():
    # the saturation test separates pure-atom (slope > 0.9) from
    # smooth-proxy (slope < 0.1) synthetic cases
    T_grid = np.geomspace(1.0, 200.0, 30)
    atom = AtomicMeasure([0.0], [1.0])
    m = 600
    smooth = AtomicMeasure(np.linspace(-1, 1, m), np.full(m, 1.0 / m))
    rep_atom = kronecker.l2_saturation_test(atom, atom, 0.5, T_grid)
    rep_smooth = kronecker.l2_saturation_test(smooth, smooth, 0.5, T_grid)
    ok = rep_atom.loglog_slope > 0.9 and rep_smooth.loglog_slope < 0.1
    _report(f"l2 growth slopes: atoms {rep_atom.loglog_slope:.3f} > 0.9, "
            f"smooth proxy {rep_smooth.loglog_slope:.3f} < 0.1", ok)


def test_cli_determinism(tmp_path):
    # every subcommand rerun with the same configuration and seed produces
    # a byte-identical CSV
    runs = [
        ["spectrum", "--beta", "2", "--v", "0.9", "--n", "300", "--bumps", "8"],
        ["prufer", "--beta", "2", "--v", "0.5", "--energy", "0.4",
         "--bumps", "10"],
        ["cesaro", "--depth", "8", "--points", "12"],
        ["cantor", "--points", "60"],
        ["kronecker", "--beta", "4", "--v", "1.0", "--theta", "0.5"],
        ["ea", "ground-state", "--d", "2", "-l", "3"],
        ["ea", "cluster-bound", "--d", "2"],
        ["ea", "scan", "--d", "2", "--sizes", "2,3", "--samples", "5"],
        ["emch", "trace", "--dist", "uniform", "--points", "20",
         "--samples", "2000"],
        ["emch", "exact", "--points", "20"],
        ["emch", "stability", "--kernel", "power"],
        ["ensemble", "check", "--draws", "5000"],
    ]
    runner = CliRunner()
    ok = True
    for k, args in enumerate(runs):
        paths = [str(tmp_path / f"run{k}_{rep}") for rep in (0, 1)]
        for p in paths:
            res = runner.invoke(cli_main, args + ["--seed", "11", "--out", p],
                                catch_exceptions=False)
            assert res.exit_code == 0, (args, res.output)
        a = open(paths[0] + ".csv", "rb").read()
        b = open(paths[1] + ".csv", "rb").read()
        if a != b:
            ok = False
            print(f"[acceptance]   non-deterministic: {' '.join(args)}")
    _report("byte-identical CSV on rerun for all 12 subcommands", ok)


def test_self_averaging():
    # spatial average over ~10^4 sites agrees between two independent
    # disorder realizations within combined 3 sigma at every grid point
    model = er.DisorderedEmchModel(er.nearest_neighbor_kernel(1, 1.0),
                                   UNIFORM, 1.0, 1.0, 5000)
    ok = True
    worst = 0.0
    for t in np.linspace(0.0, 5.0, 21):
        m1, e1 = er.finite_volume_average_f(model, t, 5000, seed=0)
        m2, e2 = er.finite_volume_average_f(model, t, 5000, seed=1)
        sigma = math.hypot(e1, e2)
        if sigma > 0:
            worst = max(worst, abs(m1 - m2) / (3.0 * sigma))
        ok = ok and abs(m1 - m2) <= 3.0 * sigma + 1e-14
    _report(f"self-averaging on 10001 sites, two seeds: worst gap "
            f"{worst:.2f} of the 3 sigma allowance", ok)
