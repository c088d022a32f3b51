"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the one-line
verdicts; every tolerance is pinned here, nothing is calibrated at run
time.
"""

import itertools
import math
import time

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammaln, roots_legendre
from scipy.stats import kstest

from dysonminor.cli import COMPARE_GRID, main
from dysonminor.correlation import gauge_compare
from dysonminor.em_oracle import (Grid, PathDescriptor, block_inverse,
                                  discretized_minor_kernel,
                                  fredholm_expansion_check, projected_kernel)
from dysonminor.kernels import (ContourRep, KernelEvalConfig, SeriesRep,
                                SpaceTimePoint, kernel_bead, kernel_dbm,
                                kernel_warren, scaled_minor_kernel,
                                step_expansion)
from dysonminor.monte_carlo import (SimConfig, dbm_minor_samples,
                                    empirical_correlation,
                                    histogram_from_samples, simulate_warren)
from dysonminor.special import (STAR_ALGEBRA, WARREN_ALGEBRA, gauss_hermite,
                                normalized_hermite_sequence,
                                transition_density)

P = SpaceTimePoint
CONTOUR = KernelEvalConfig(ContourRep())


def verdict(num: int, name: str, ok: bool, detail: str = ""):
    line = f"ACCEPTANCE {num:2d} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def bin_average(fn, lo, hi, nodes=5):
    xs, ws = roots_legendre(nodes)
    xs = lo + (hi - lo) * 0.5 * (xs + 1.0)
    return float(np.sum(ws * np.array([fn(x) for x in xs]))
                 * 0.5)  # mean over the bin


def test_criterion_1_representation_equality():
    start = time.time()
    worst = 0.0
    for (n, t, x, npr, tp, xp) in COMPARE_GRID:
        p, q = P(n, t, x), P(npr, tp, xp)
        s = kernel_dbm(p, q)
        c = kernel_dbm(p, q, CONTOUR)
        worst = max(worst, abs(s - c) / max(abs(s), abs(c)))
        pw, qw = P(n, t + 1.0, x), P(npr, tp + 1.0, xp)
        pref = 2.0 ** (0.5 * (n - npr))
        sw = pref * kernel_warren(pw, qw)
        cw = pref * kernel_warren(pw, qw, CONTOUR)
        worst = max(worst, abs(sw - cw) / max(abs(sw), abs(cw)))
    elapsed = time.time() - start
    verdict(1, "series = contour on 30-case grid",
            worst < 1e-7 and elapsed < 30.0,
            f"max rel err {worst:.2e}, {elapsed:.1f}s")


def test_criterion_2_specialisations(hermite_oracle):
    start = time.time()
    worst = 0.0
    # (a) t = t' finite branch equals the minor-kernel direct sum
    for (n, npr) in [(1, 2), (2, 2), (2, 4), (3, 6)]:
        for (x, xp) in [(0.4, -0.6), (-1.0, 0.7)]:
            direct = 0.0
            for l in range(-min(n, npr), 0):
                ratio = math.exp(0.5 * (gammaln(npr + l + 1)
                                        - gammaln(n + l + 1)))
                direct += (ratio * hermite_oracle(n + l, x)
                           * hermite_oracle(npr + l, xp) * math.exp(-xp * xp))
            got = kernel_dbm(P(n, 0.8, x), P(npr, 0.8, xp))
            worst = max(worst, abs(got - direct))
    # (b) n = n' equals the extended stationary-OU kernel direct sums
    for (t, tp) in [(0.3, 1.1), (1.1, 0.3)]:
        for n in (1, 3):
            x, xp = 0.5, -0.3
            tau = tp - t
            if t >= tp:
                rng_l = range(-n, 0)
                sign = 1.0
            else:
                # exp(-0.8 l) is below 1e-12 by l = 35; stay well under
                # the float-overflow degree of the exact-coefficient oracle
                rng_l = range(0, 120)
                sign = -1.0
            direct = sign * sum(
                math.exp(0.5 * (gammaln(n + l + 1) - gammaln(n + l + 1)))
                * math.exp(-l * tau) * hermite_oracle(n + l, x)
                * hermite_oracle(n + l, xp) * math.exp(-xp * xp)
                for l in rng_l)
            got = kernel_dbm(P(n, t, x), P(n, tp, xp))
            worst = max(worst, abs(got - direct))
    # (c) closed-form level densities (n <= 4) from the Rodrigues oracle
    for n in (1, 2, 3, 4):
        for x in np.linspace(-2.5, 2.5, 11):
            density = sum(hermite_oracle(k, float(x)) ** 2
                          for k in range(n)) * math.exp(-x * x)
            got = kernel_dbm(P(n, 0.6, float(x)), P(n, 0.6, float(x)))
            worst = max(worst, abs(got - density))
    elapsed = time.time() - start
    verdict(2, "t=t' / n=n' specialisations",
            worst < 1e-9 and elapsed < 5.0,
            f"max abs dev {worst:.2e}, {elapsed:.1f}s")


BEAD_CONFIGS = {
    0.0: [(0, 0, 0.0, 0.0, 0.0, 0.0),
          (0, 0, 0.0, 0.5, 0.3, 0.0),
          (0, 0, 0.0, 1.0, -0.4, 0.0)],
    0.5: [(1, 0, 0.0, 0.8, 1.2, 0.0),
          (0, 0, 0.0, 0.8, -0.7, 0.0),
          (-1, 0, 0.0, 0.3, 0.5, 0.0)],
}


def test_criterion_3_bead_limit():
    start = time.time()
    ok = True
    details = []
    for a, configs in BEAD_CONFIGS.items():
        for (n, npr, t, tp, x, xp) in configs:
            p, q = P(n, t, x), P(npr, tp, xp)
            target = kernel_bead(a, p, q)
            errs = [abs(scaled_minor_kernel(big_n, a, p, q) - target)
                    for big_n in (50, 100, 200, 400)]
            mono = all(errs[i] > errs[i + 1] for i in range(3))
            ok &= mono and errs[-1] < 1e-2
            details.append(f"a={a} cfg={(n, npr, tp - t, x - xp)} "
                           f"err400={errs[-1]:.1e} mono={mono}")
    # the a = 0 equal-argument case converges to 1/pi
    diag = scaled_minor_kernel(400, 0.0, P(0, 0.0, 0.0), P(0, 0.0, 0.0))
    ok &= abs(diag - 1.0 / math.pi) < 1e-3
    elapsed = time.time() - start
    verdict(3, "bead bulk-scaling limit",
            ok and elapsed < 120.0,
            f"diag400={diag:.6f} vs 1/pi, {elapsed:.1f}s")


def test_criterion_4_sine_kernel_specialisation():
    worst = 0.0
    for delta in np.linspace(-5.0, 5.0, 81):
        got = kernel_bead(0.0, P(3, 0.7, float(delta)), P(3, 0.7, 0.0))
        want = (math.sin(delta) / (math.pi * delta) if delta != 0
                else 1.0 / math.pi)
        worst = max(worst, abs(got - want))
    verdict(4, "bead t=t' is the sine kernel", worst < 1e-9,
            f"max abs dev {worst:.2e} on |x-x'| <= 5")


def test_criterion_5_discrete_oracle():
    start = time.time()
    grid = Grid.uniform(-5, 5, 200)
    # (a) single-level density, sup norm, refinement behaviour
    dk = discretized_minor_kernel([(1, 0.5)], grid, u=-8.0, family="ou")
    target = np.exp(-grid.points ** 2) / math.sqrt(math.pi)
    err_200 = float(np.abs(dk.rho1(0) - target).max())
    grid_400 = Grid.uniform(-5, 5, 400)
    dk_400 = discretized_minor_kernel([(1, 0.5)], grid_400, u=-8.0,
                                      family="ou")
    err_400 = float(np.abs(
        dk_400.rho1(0) - np.exp(-grid_400.points ** 2)
        / math.sqrt(math.pi)).max())
    # uniform-grid Gaussian sums are spectrally accurate: both errors sit
    # at the linear-algebra noise floor, so the 1.7x improvement clause
    # binds only above that floor
    part_a = err_200 < 2e-2 and (err_400 * 1.7 <= err_200
                                 or max(err_200, err_400) < 1e-8)
    # (b) two-level space-like instance against the analytic kernel
    path = PathDescriptor.from_nodes([(2, 0.2), (2, 0.7), (1, 0.7)])
    dk2 = discretized_minor_kernel(path, grid, u=-8.0, family="ou")
    idx = list(range(40, 161, 24))
    pts, slices, gidx = [], [], []
    for i in idx[:3]:
        pts.append(P(2, 0.2, float(grid.points[i])))
        slices.append(0)
        gidx.append(i)
    for i in idx[3:5]:
        pts.append(P(1, 0.7, float(grid.points[i])))
        slices.append(2)
        gidx.append(i)

    def oracle_kernel(p, q):
        ia, ib = pts.index(p), pts.index(q)
        return dk2.kernel_entry(slices[ia], gidx[ia], slices[ib], gidx[ib])

    res = gauge_compare(oracle_kernel, kernel_dbm, pts, tol=2e-2, max_order=2)
    rho1_dev = max(
        float(np.abs(dk2.rho1(0) - np.array(
            [kernel_dbm(P(2, 0.2, x), P(2, 0.2, x))
             for x in grid.points])).max()),
        float(np.abs(dk2.rho1(2) - np.array(
            [kernel_dbm(P(1, 0.7, x), P(1, 0.7, x))
             for x in grid.points])).max()))
    elapsed = time.time() - start
    verdict(5, "discrete Eynard-Mehta oracle",
            part_a and res.passed and rho1_dev < 2e-2 and elapsed < 60.0,
            f"err200={err_200:.1e} err400={err_400:.1e} "
            f"rho-dev={max(rho1_dev, res.max_deviation):.1e}, {elapsed:.1f}s")


def test_criterion_6_structural_lemmas():
    start = time.time()
    rng = np.random.default_rng(2024)
    worst_fred = 0.0
    for _ in range(100):
        size = int(rng.integers(1, 9))
        m = rng.uniform(-1, 1, (size, size))
        lhs, rhs = fredholm_expansion_check(m)
        worst_fred = max(worst_fred, abs(lhs - rhs))
    worst_block = 0.0
    done = 0
    while done < 100:
        p = int(rng.integers(1, 6))
        q = int(rng.integers(1, 6))
        a = rng.normal(size=(p, p))
        b = rng.normal(size=(p, q))
        c = rng.normal(size=(q, p))
        d = rng.normal(size=(q, q)) + 4 * np.eye(q)
        full_mat = np.block([[a, b], [c, d]])
        # the identity is exact; verifying it to 1e-12 in floats needs the
        # roundoff (~ cond * eps) below that, so skip ill-conditioned draws
        if np.linalg.cond(full_mat) > 300 or np.linalg.cond(d) > 300:
            continue
        tl, tr, bl, br = block_inverse(a, b, c, d)
        full = np.linalg.inv(full_mat)
        dev = max(np.abs(full[:p, :p] - tl).max(),
                  np.abs(full[:p, p:] - tr).max(),
                  np.abs(full[p:, :p] - bl).max(),
                  np.abs(full[p:, p:] - br).max())
        worst_block = max(worst_block, dev)
        done += 1
    worst_proj = 0.0
    checked = 0
    while checked < 20:
        size = int(rng.integers(4, 7))
        l = rng.uniform(-1, 1, (size, size))
        n_keep = int(rng.integers(2, size))
        retained = sorted(rng.choice(size, size=n_keep, replace=False))
        a_mat = l.copy()
        a_mat[retained, retained] += 1.0
        if np.linalg.cond(a_mat) > 1e8 or \
                abs(np.linalg.det(np.eye(size) + l)) < 1e-3:
            continue
        k = projected_kernel(l, retained)
        phantom = [i for i in range(size) if i not in retained]
        denom = np.linalg.det(np.eye(size) + l)
        pr_phantom = 0.0
        for r in range(size + 1):
            for sub in itertools.combinations(range(size), r):
                if set(phantom) <= set(sub):
                    sel = np.ix_(sub, sub)
                    pr_phantom += (np.linalg.det(l[sel]) / denom if sub
                                   else 1.0 / denom)
        for r in range(1, len(retained) + 1):
            for sub in itertools.combinations(range(len(retained)), r):
                sel = np.ix_(sub, sub)
                det_k = np.linalg.det(k[sel])
                acc = 0.0
                want_set = {retained[i] for i in sub} | set(phantom)
                for rr in range(size + 1):
                    for s2 in itertools.combinations(range(size), rr):
                        if want_set <= set(s2):
                            sel2 = np.ix_(s2, s2)
                            acc += (np.linalg.det(l[sel2]) / denom if s2
                                    else 1.0 / denom)
                worst_proj = max(worst_proj, abs(det_k - acc / pr_phantom))
        checked += 1
    elapsed = time.time() - start
    verdict(6, "structural lemmas",
            worst_fred < 1e-12 and worst_block < 1e-12
            and worst_proj < 1e-10 and elapsed < 30.0,
            f"fred {worst_fred:.1e}, block {worst_block:.1e}, "
            f"proj {worst_proj:.1e}, {elapsed:.1f}s")


def _hermite_t(k, t, x):
    return normalized_hermite_sequence(k, x / math.sqrt(t))[k]


def test_criterion_7_convolution_identities():
    start = time.time()
    rng = np.random.default_rng(7)
    worst = 0.0

    def track(dev):
        nonlocal worst
        worst = max(worst, abs(dev))

    for _ in range(10):
        n = int(rng.integers(0, 5))
        m = int(rng.integers(1, 4))
        s = float(rng.uniform(0.2, 1.2))
        t = float(rng.uniform(0.4, 1.6))
        y = float(rng.uniform(-1.5, 1.5))
        z = float(rng.uniform(-1.5, 1.5))
        x = float(rng.uniform(-1.5, 1.5))

        # --- time-step (star, as printed): q*^n factor
        lhs, _ = quad(lambda v: normalized_hermite_sequence(n, v)[n]
                      * math.exp(-v * v)
                      * transition_density("ou", s, v, y), -12, 12, limit=200)
        rhs = math.exp(-s * n) * normalized_hermite_sequence(n, y)[n] \
            * math.exp(-y * y)
        track(lhs - rhs)
        # --- time-step (time-indexed): one extra factor q = sigma(t)/sigma(t+s)
        lhs, _ = quad(lambda v: _hermite_t(n, t, v) * math.exp(-v * v / t)
                      * transition_density("bm", s, v, y), -14, 14, limit=200)
        q_ts = WARREN_ALGEBRA.q(s, base=t)
        rhs = q_ts ** (n + 1) * _hermite_t(n, t + s, y) \
            * math.exp(-y * y / (t + s))
        track(lhs - rhs)

        # --- space-step, both families
        lhs, _ = quad(lambda v: normalized_hermite_sequence(n + 1, v)[n + 1]
                      * math.exp(-v * v), y, 12, limit=200)
        rhs = STAR_ALGEBRA.sigma() / math.sqrt(n + 1) \
            * normalized_hermite_sequence(n, y)[n] * math.exp(-y * y)
        track(lhs - rhs)
        lhs, _ = quad(lambda v: _hermite_t(n + 1, t, v)
                      * math.exp(-v * v / t), y, 14, limit=200)
        rhs = WARREN_ALGEBRA.sigma(t) / math.sqrt(n + 1) \
            * _hermite_t(n, t, y) * math.exp(-y * y / t)
        track(lhs - rhs)

        # --- space-step-back: int H^m(x-v) H(v-z) dv = H^(m+1)(x-z)
        if x >= z:
            lhs, _ = quad(lambda v: (x - v) ** (m - 1) / math.gamma(m),
                          z, x, limit=200)
            rhs = (x - z) ** m / math.gamma(m + 1)
        else:
            lhs, rhs = 0.0, 0.0
        track(lhs - rhs)

        # --- time-semigroup, both families
        lhs, _ = quad(lambda v: transition_density("bm", s, x, v)
                      * transition_density("bm", t, v, z),
                      -np.inf, np.inf)
        track(lhs - transition_density("bm", s + t, x, z))
        lhs, _ = quad(lambda v: transition_density("ou", s, x, v)
                      * transition_density("ou", t, v, z),
                      -np.inf, np.inf)
        track(lhs - transition_density("ou", s + t, x, z))

        # --- time-step-back: int p_t(x,v) H^m(v-z) dv
        #                       = r_t^m int H^m(x-v) p_t(v,z) dv
        for fam, kind in (("star", "ou"), ("warren", "bm")):
            lhs, _ = quad(lambda v: transition_density(kind, t, x, v)
                          * (v - z) ** (m - 1) / math.gamma(m), z, np.inf)
            rhs, _ = quad(lambda v: (x - v) ** (m - 1) / math.gamma(m)
                          * transition_density(kind, t, v, z), -np.inf, x)
            r = STAR_ALGEBRA.r(t) if fam == "star" else 1.0
            track(lhs - r ** m * rhs)

        # --- space-shift p_t(x + y, z) = p_t(x, z - r_t y)
        track(transition_density("bm", t, x + y, z)
              - transition_density("bm", t, x, z - y))
        track(transition_density("ou", t, x + y, z)
              - transition_density("ou", t, x, z - math.exp(-t) * y))

        # --- q-, r-, qr-composition
        t1, t2, t3 = s, s + 0.4, s + 1.1
        track(WARREN_ALGEBRA.q(t2 - t1, base=t1)
              * WARREN_ALGEBRA.q(t3 - t2, base=t2)
              - WARREN_ALGEBRA.q(t3 - t1, base=t1))
        track(STAR_ALGEBRA.q(t2 - t1) * STAR_ALGEBRA.q(t3 - t2)
              - STAR_ALGEBRA.q(t3 - t1))
        track(STAR_ALGEBRA.r(s) * STAR_ALGEBRA.r(t) - STAR_ALGEBRA.r(s + t))
        track(WARREN_ALGEBRA.r(s) * WARREN_ALGEBRA.r(t)
              - WARREN_ALGEBRA.r(s + t))
        track(WARREN_ALGEBRA.q(t2 - t1, base=t1) / WARREN_ALGEBRA.sigma(t1)
              - WARREN_ALGEBRA.r(t2 - t1) / WARREN_ALGEBRA.sigma(t2))
        track(STAR_ALGEBRA.q(t2 - t1) / STAR_ALGEBRA.sigma()
              - STAR_ALGEBRA.r(t2 - t1) / STAR_ALGEBRA.sigma())

    # orthogonality under 64-node Gauss-Hermite, both families
    nodes, weights = gauss_hermite(64)
    vals = np.stack([normalized_hermite_sequence(30, v) for v in nodes])
    gram = vals.T * weights @ vals
    track(np.abs(gram - np.eye(31)).max())
    tt = 1.9
    vals = np.stack([normalized_hermite_sequence(25, v) for v in nodes])
    gram = vals.T * weights @ vals * math.sqrt(tt)
    track(np.abs(gram - math.sqrt(2) * WARREN_ALGEBRA.sigma(tt)
                 * np.eye(26)).max())

    # step expansion vs quadrature for n <= 3, both families
    worst_step = 0.0
    for n in (1, 2, 3):
        for fam in ("warren", "star"):
            s0 = 0.6 if fam == "warren" else 0.0
            t0 = s0 + 0.8
            x0, z0 = 0.45, -0.25
            kind = "bm" if fam == "warren" else "ou"
            ref, _ = quad(lambda v: (x0 - v) ** (n - 1) / math.gamma(n)
                          * transition_density(kind, t0 - s0, v, z0),
                          -np.inf, x0)
            got = step_expansion(n, s0, t0, x0, z0, family=fam)
            worst_step = max(worst_step, abs(got - ref))
    elapsed = time.time() - start
    verdict(7, "convolution identity suite",
            worst < 1e-8 and worst_step < 1e-7 and elapsed < 60.0,
            f"identities {worst:.1e}, step-expansion {worst_step:.1e}, "
            f"{elapsed:.1f}s")


def test_criterion_8_monte_carlo_dbm():
    start = time.time()
    cfg = SimConfig(dimension=2, times=(0.5, 1.0, 1.5), paths=100_000,
                    seed=20240809)
    samples = dbm_minor_samples(cfg, threads=2)
    ok = True
    worst_z = 0.0
    for (lvl, t) in [(1, 0.5), (2, 1.0)]:
        hist = histogram_from_samples(samples[t][lvl - 1],
                                      np.linspace(-2.0, 2.0, 11), cfg.paths)
        for lo, hi, dens, se in zip(hist.edges[:-1], hist.edges[1:],
                                    hist.density, hist.std_error):
            want = bin_average(
                lambda x: kernel_dbm(P(lvl, t, x), P(lvl, t, x)), lo, hi)
            z = (dens - want) / se
            worst_z = max(worst_z, abs(z))
            ok &= abs(z) < 3.0
    # two-point query at 10^6 paths
    cfg2 = SimConfig(dimension=2, times=(1.0, 1.5), paths=1_000_000,
                     seed=424242)
    samples2 = dbm_minor_samples(cfg2, threads=2)
    flat = {(2, 1.0): samples2[1.0][1], (1, 1.5): samples2[1.5][0]}
    w = 0.2
    pa, pb = (2, 1.0, 0.0), (1, 1.5, 0.5)
    est = empirical_correlation(flat, [pa, pb], w)
    xs, ws_ = roots_legendre(5)

    def rho2(xa, xb):
        p, q = P(2, 1.0, xa), P(1, 1.5, xb)
        return (kernel_dbm(p, p) * kernel_dbm(q, q)
                - kernel_dbm(p, q) * kernel_dbm(q, p))

    want = 0.0
    for xa, wa in zip(pa[2] + w * 0.5 * xs, ws_):
        for xb, wb in zip(pb[2] + w * 0.5 * xs, ws_):
            want += wa * wb * rho2(xa, xb)
    want /= 4.0
    z2 = (est.value - want) / est.std_error
    ok &= abs(z2) < 3.0
    elapsed = time.time() - start
    verdict(8, "Monte Carlo vs theory (DBM)",
            ok and elapsed < 600.0,
            f"max |z| rho1 {worst_z:.2f}, rho2 z {z2:.2f}, {elapsed:.0f}s")


def test_criterion_9_warren_simulator():
    start = time.time()
    t_obs = 1.0
    cfg = SimConfig(dimension=0, times=(t_obs,), paths=100_000,
                    seed=55_2024, euler_step=5e-4)
    obs = simulate_warren(2, cfg, threads=2)
    lvl1 = obs[t_obs][0]
    lvl2 = obs[t_obs][1]
    p_ks = kstest(lvl1.ravel(), "norm", args=(0.0, math.sqrt(t_obs / 2))).pvalue
    interlaced = bool(np.all((lvl2[:, 0] <= lvl1[:, 0])
                             & (lvl1[:, 0] <= lvl2[:, 1])))
    hist = histogram_from_samples(lvl2, np.linspace(-2.2, 2.2, 11), cfg.paths)
    worst_z = 0.0
    for lo, hi, dens, se in zip(hist.edges[:-1], hist.edges[1:],
                                hist.density, hist.std_error):
        want = bin_average(
            lambda x: kernel_warren(P(2, t_obs, x), P(2, t_obs, x)), lo, hi)
        worst_z = max(worst_z, abs((dens - want) / se))
    elapsed = time.time() - start
    verdict(9, "Warren simulator",
            p_ks > 0.01 and interlaced and worst_z < 3.0 and elapsed < 600.0,
            f"KS p {p_ks:.3f}, interlaced {interlaced}, "
            f"max |z| {worst_z:.2f}, {elapsed:.0f}s")


def test_criterion_10_cli_determinism(tmp_path):
    def run_twice(args, name):
        a = tmp_path / f"{name}_a.csv"
        b = tmp_path / f"{name}_b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        return a.read_bytes() == b.read_bytes()

    ok = run_twice(["simulate", "--process", "dbm", "--N", "2", "--times",
                    "0.5,1.0", "--paths", "20000", "--seed", "99",
                    "--histogram", "2,1.0,-3,3,12"], "dbm")
    ok &= run_twice(["simulate", "--process", "warren", "--N", "2",
                     "--times", "0.5", "--paths", "5000", "--seed", "7",
                     "--euler-step", "0.002",
                     "--histogram", "2,0.5,-2,2,8"], "warren")
    ok &= run_twice(["kernel", "--family", "dbm", "--point", "2,0.5,0.3",
                     "--point2", "1,1.0,-0.2"], "kernel")
    ok &= run_twice(["bead-limit", "--a", "0.5", "--levels", "1,0",
                     "--dt", "0.8", "--dx", "1.2", "--N", "50,100"], "bead")
    verdict(10, "CLI determinism", ok, "byte-identical reruns")
