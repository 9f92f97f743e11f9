"""Top-level acceptance checks, one per shipped guarantee.

Each test prints a single [PASS]/[FAIL] line (visible with ``pytest -s``)
carrying the measured margin next to the contractual bound.
"""

import json
import math
import time
import warnings

import numpy as np

from hmimo import (EEProblem, LinkConfig, PowerModel, SurfaceGeometry,
                   angular_stream, build_lattice, build_problem,
                   closed_form_rate, dof_approx, ee_objective, fourier_basis,
                   grid_scan_oracle, isotropic_variances, kkt_residuals,
                   monte_carlo_rate, optimize, snr_to_pu, solve_stationary,
                   uniform_variances)
from hmimo.cli import main

MC_SEED = 20260816


def report(label, ok, detail):
    print("[%s] %s: %s" % ("PASS" if ok else "FAIL", label, detail))
    assert ok, "%s: %s" % (label, detail)


def rand_problem(rng):
    K = int(rng.integers(1, 5))
    n_r = int(rng.integers(1, 9))
    n_s = int(rng.integers(1, 101))
    return EEProblem(
        a=10.0 ** rng.uniform(-2, 2, (K, n_r)),
        b=10.0 ** rng.uniform(-1, 3, (K, n_r)),
        c=float(10.0 ** rng.uniform(-2, 1)),
        P_1=float(10.0 ** rng.uniform(-4, -1)),
        P_2=float(10.0 ** rng.uniform(-1, 2)),
        n_s=n_s, n_r=n_r, K=K,
    )


def scenario_problem(L_s, p_u):
    """Raw isotropic instance with the default circuit constants."""
    lat_s = build_lattice(L_s, L_s)
    lat_r = build_lattice(1, 1)
    prof = isotropic_variances(lat_s, lat_r, 3, normalize=False)
    link = LinkConfig(p_u=p_u, K=3, sigma2_w=1.0)
    model = PowerModel(K=3, p_u=p_u)
    return build_problem(prof, link, model, len(lat_s), len(lat_r))


def test_01_closed_form_tracks_monte_carlo():
    t0 = time.time()
    worst = 0.0
    for L in (1.0, 2.0, 3.0):
        lat = build_lattice(L, L)
        prof = isotropic_variances(lat, lat, 3)
        for N in (len(lat), 80):
            for snr_db in (-10.0, 0.0, 10.0, 20.0):
                cfg = LinkConfig(p_u=snr_to_pu(snr_db), K=3, trials=1000)
                th = closed_form_rate(prof, cfg, N, N)
                mc = monte_carlo_rate(prof, cfg, N, N, seed=MC_SEED)
                worst = max(worst, abs(mc.sum_rate / th.sum_rate - 1))
    elapsed = time.time() - t0
    report("closed form vs Monte-Carlo",
           worst < 0.05 and elapsed < 120.0,
           "worst sum-rate error %.2f%% (bound 5%%) over 24 configurations "
           "in %.1fs (bound 120s)" % (100 * worst, elapsed))


def test_02_high_snr_saturation():
    lat = build_lattice(2, 2)
    prof = isotropic_variances(lat, lat, 3)
    cfg = LinkConfig(p_u=snr_to_pu(30.0), K=3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # 12 elements sit below the 13 harmonics
        r12 = closed_form_rate(prof, cfg, 12, 12)
    r80 = closed_form_rate(prof, cfg, 80, 80)
    gap = abs(r12.sum_rate / r80.sum_rate - 1)
    report("high-SNR saturation", gap < 0.01,
           "sum rate at N=12 vs N=80 differs by %.3f%% (bound 1%%)" % (100 * gap))


def test_03_dof_approximation_reference_points():
    got = (dof_approx(1, 1), dof_approx(2, 2))
    report("DoF approximation", got == (3, 12),
           "dof_approx(1,1)=%d, dof_approx(2,2)=%d (want 3, 12)" % got)


def test_04_semi_unitary_bases():
    worst = 0.0
    count = 0
    for L in (1.0, 2.0, 3.0):
        lat = build_lattice(L, L)
        side = 2 * math.floor(L)
        for n in (side + 1, side + 2, 12):
            for z in (0.0, 1.5):
                U = fourier_basis(SurfaceGeometry(L, L, n, n, z_offset=z),
                                  lat).matrix
                G = U.conj().T @ U
                worst = max(worst, float(np.abs(G - np.eye(len(lat))).max()))
                count += 1
    report("semi-unitary bases", worst < 1e-10,
           "max |U^H U - I| = %.2e over %d bases (bound 1e-10)" % (worst, count))


def test_05_moment_identities():
    prof = uniform_variances(12, 3, 3)
    N_s, N_r, trials = 16, 4, 10000
    nn = float(N_s * N_r)
    s2r = prof.sigma2_r.reshape(-1)
    S = s2r.size

    sum_tr = 0.0
    sum_diag = np.zeros(S)
    sum_diag2 = np.zeros(S)
    sum_off = 0.0
    for h in angular_stream(prof, N_s, N_r, seed=0, trials=trials):
        g = h @ h.conj().T
        d = np.diagonal(g).real
        sum_diag += d
        sum_diag2 += d * d
        sum_tr += d.sum()
        a2 = (g * g.conj()).real
        sum_off += a2.sum() - np.diagonal(a2).sum()

    # the flat profile makes every stream statistically identical, so the
    # estimators pool streams as well as draws
    mean_diag = float(sum_diag.sum()) / (trials * S)
    var_diag = float(sum_diag2.sum()) / (trials * S) - mean_diag**2
    mean_off = sum_off / (trials * S * (S - 1))
    mean_tr = sum_tr / trials

    ref_mean = nn * s2r[0] * prof.sum_s
    ref_var = nn**2 * s2r[0] ** 2 * prof.sum_s4
    ref_off = nn**2 * s2r[0] * s2r[1] * prof.sum_s4
    ref_tr = nn * prof.cross_sum  # inverse of the precoder normalization

    errs = {
        "beam gain mean": abs(mean_diag / ref_mean - 1),
        "beam gain variance": abs(var_diag / ref_var - 1),
        "cross-stream leakage": abs(mean_off / ref_off - 1),
        "total energy": abs(mean_tr / ref_tr - 1),
    }
    worst_name = max(errs, key=errs.get)
    report("channel moment identities", max(errs.values()) < 0.03,
           "worst of four moments (%s) off by %.2f%% at %d draws (bound 3%%)"
           % (worst_name, 100 * errs[worst_name], trials))


def test_06_stationary_residuals():
    rng = np.random.default_rng(42)
    worst_r, worst_t = 0.0, 0.0
    for _ in range(50):
        p = rand_problem(rng)
        t0 = time.time()
        ns, nr = solve_stationary(p)
        worst_t = max(worst_t, time.time() - t0)
        r1, r2 = kkt_residuals(p, ns, nr)
        worst_r = max(worst_r, abs(float(r1)), abs(float(r2)))
    report("stationary-point residuals",
           worst_r < 1e-8 and worst_t < 1.0,
           "worst |residual| %.2e (bound 1e-8), slowest solve %.3fs (bound 1s) "
           "over 50 instances" % (worst_r, worst_t))


def test_07_grid_oracle_agreement():
    rng = np.random.default_rng(42)
    mismatches = 0
    for _ in range(50):
        p = rand_problem(rng)
        r = optimize(p)
        g = grid_scan_oracle(p, (p.n_s, p.n_s + 600), (p.n_r, p.n_r + 300))
        if (r.N_s_opt, r.N_r_opt) != (g.N_s_opt, g.N_r_opt):
            mismatches += 1
    worst_t = 0.0
    for L_s in (5.0, 7.0):
        for p_u in (0.001, 0.01, 1.0):
            p = scenario_problem(L_s, p_u)
            r = optimize(p)
            t0 = time.time()
            g = grid_scan_oracle(p, (p.n_s, p.n_s + 600), (p.n_r, p.n_r + 300))
            worst_t = max(worst_t, time.time() - t0)
            if (r.N_s_opt, r.N_r_opt) != (g.N_s_opt, g.N_r_opt):
                mismatches += 1
    report("grid-scan agreement",
           mismatches == 0 and worst_t < 60.0,
           "%d mismatches over 50 random + 6 scenario instances, slowest "
           "scenario grid %.2fs (bound 60s)" % (mismatches, worst_t))


def test_08_power_regimes():
    opts = {(L_s, p_u): optimize(scenario_problem(L_s, p_u))
            for L_s in (5.0, 7.0) for p_u in (0.001, 0.01, 1.0)}
    n_s = {5.0: 81, 7.0: 149}

    a = opts[(5.0, 1.0)].N_s_opt == n_s[5.0]
    b = (opts[(5.0, 0.001)].N_s_opt > n_s[5.0]
         and opts[(5.0, 0.001)].N_r_opt > 5)
    seq = [opts[(5.0, p)].N_s_opt for p in (0.001, 0.01, 1.0)]
    c = all(x >= y for x, y in zip(seq, seq[1:]))
    d = all(
        abs(opts[(7.0, p)].N_s_opt / n_s[7.0] - 1)
        <= abs(opts[(5.0, p)].N_s_opt / n_s[5.0] - 1)
        for p in (0.001, 0.01, 1.0)
    )
    report("power-regime reproduction", a and b and c and d,
           "high power pins N_s to %d: %s; low power grows both counts "
           "(N_s=%d, N_r=%d): %s; N_s %s nonincreasing in power: %s; larger "
           "transmit surface shrinks the relative overshoot: %s"
           % (n_s[5.0], a, opts[(5.0, 0.001)].N_s_opt,
              opts[(5.0, 0.001)].N_r_opt, b, seq, c, d))


def log_sum(prob, ns, nr):
    nn = float(ns) * float(nr)
    return float(np.log1p(prob.a * nn / (prob.c * nn + prob.b)).sum())


def count_falls_then_rises(vals, rtol=1e-9):
    seen_fall = violations = 0
    for u, v in zip(vals, vals[1:]):
        if abs(v - u) <= rtol * max(abs(u), abs(v)):
            continue
        if v < u:
            seen_fall = 1
        elif seen_fall:
            violations += 1
    return violations


def test_09_objective_shape():
    rng = np.random.default_rng(2718)

    # numerator curvature along each axis at scattered interior points
    bad_curv = 0
    for _ in range(10):
        p = rand_problem(rng)
        for _ in range(10):
            ns = float(p.n_s + rng.integers(1, 400))
            nr = float(p.n_r + rng.integers(1, 200))
            d2s = (log_sum(p, ns - 1, nr) - 2 * log_sum(p, ns, nr)
                   + log_sum(p, ns + 1, nr))
            d2r = (log_sum(p, ns, nr - 1) - 2 * log_sum(p, ns, nr)
                   + log_sum(p, ns, nr + 1))
            if not (d2s < 0 and d2r < 0):
                bad_curv += 1

    # each stationarity equation crosses zero exactly once over the bracket
    grid = np.logspace(-3, 9, 400)
    bad_cross = 0
    for _ in range(20):
        p = rand_problem(rng)
        r1 = kkt_residuals(p, grid, float(p.n_r))[0]
        r2 = kkt_residuals(p, float(p.n_s), grid)[1]
        for r in (np.asarray(r1), np.asarray(r2)):
            s = np.sign(r)
            s = s[s != 0]
            if int(np.count_nonzero(np.diff(s))) != 1:
                bad_cross += 1

    # efficiency along random straight lines through the box never dips
    # and recovers
    bad_lines = 0
    for _ in range(40):
        p = rand_problem(rng)
        a = np.array([p.n_s + rng.uniform(0, 500), p.n_r + rng.uniform(0, 300)])
        b = np.array([p.n_s + rng.uniform(0, 500), p.n_r + rng.uniform(0, 300)])
        t = np.linspace(0.0, 1.0, 200)
        pts = a[None, :] + t[:, None] * (b - a)[None, :]
        vals = [float(ee_objective(p, x, y)) for x, y in pts]
        bad_lines += count_falls_then_rises(vals)

    ok = bad_curv == 0 and bad_cross == 0 and bad_lines == 0
    report("objective shape", ok,
           "curvature sign violations %d/100, equations with multiple zero "
           "crossings %d/80, rises after a fall on random lines %d/40"
           % (bad_curv, bad_cross, bad_lines))


def test_10_thread_determinism(tmp_path):
    cfg = {"scenario": "acceptance", "K": 3, "L": [1.0], "N": [5, 8],
           "snr_db": [-10.0, 0.0, 10.0], "trials": 400, "seed": 1}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    outputs = []
    for threads in (1, 4):
        out = tmp_path / ("t%d" % threads)
        rc = main(["rate-sweep", "--config", str(cfg_path), "--out", str(out),
                   "--threads", str(threads)])
        assert rc == 0
        outputs.append((out / "rates.csv").read_bytes())
    same = outputs[0] == outputs[1]
    report("thread-count determinism", same,
           "rate sweep rerun with 1 and 4 threads produced %s CSV bytes"
           % ("identical" if same else "DIFFERENT"))
