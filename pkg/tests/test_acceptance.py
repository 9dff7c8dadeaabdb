"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line (collected
again in the terminal summary) and then asserts."""

import math
import os
import shutil
import time

import numpy as np
import pytest

from dfw import approx, cli, kernels, pdesolve, specfun, transform
from dfw.approx import BasisSpec
from dfw.kernels import Family
from dfw.pdesolve import BoundaryProblem, PdeSpec
from dfw.transform import SampleSet

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def rel(a, b):
    return abs(a - b) / abs(b)


# -- 1 -------------------------------------------------------------------------

def _deriv5(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def test_1_special_functions(verdict):
    t0 = time.perf_counter()
    xs = np.linspace(0.1, 20.0, 40)
    closed = {
        "J": lambda x: math.sqrt(2 / (math.pi * x)) * math.sin(x),
        "Y": lambda x: -math.sqrt(2 / (math.pi * x)) * math.cos(x),
        "I": lambda x: math.sqrt(2 / (math.pi * x)) * math.sinh(x),
        "K": lambda x: math.sqrt(math.pi / (2 * x)) * math.exp(-x),
    }
    half = max(rel(specfun.bessel(k, 0.5, x), f(x)) for k, f in closed.items() for x in xs)

    rng = np.random.default_rng(101)
    rec = 0.0
    for _ in range(100):
        nu, x = rng.uniform(1, 5), rng.uniform(0.5, 30)
        jm, j0, jp = (specfun.bessel("J", nu + d, x) for d in (-1, 0, 1))
        rec = max(rec, abs(jm + jp - 2 * nu / x * j0) / (abs(jm) + abs(jp)))
        im, i0, ip = (specfun.bessel("I", nu + d, x) for d in (-1, 0, 1))
        rec = max(rec, abs(im - ip - 2 * nu / x * i0) / (abs(im) + abs(ip)))

    wr = 0.0
    for _ in range(100):
        nu, x = rng.uniform(0, 5), rng.uniform(0.5, 20)
        h = 1e-3 * x
        J = lambda t: specfun.bessel("J", nu, t)
        Y = lambda t: specfun.bessel("Y", nu, t)
        I = lambda t: specfun.bessel("I", nu, t)
        K = lambda t: specfun.bessel("K", nu, t)
        w1 = J(x) * _deriv5(Y, x, h) - _deriv5(J, x, h) * Y(x)
        w2 = I(x) * _deriv5(K, x, h) - _deriv5(I, x, h) * K(x)
        wr = max(wr, rel(w1, 2 / (math.pi * x)), rel(w2, -1 / x))
    elapsed = time.perf_counter() - t0

    ok = half < 1e-9 and rec < 1e-8 and wr < 1e-6 and elapsed < 1.0
    verdict(1, "special-function suite", ok,
            f"half-order {half:.1e}, recurrence {rec:.1e}, Wronskian {wr:.1e}, {elapsed:.2f} s")
    assert ok


# -- 2 -------------------------------------------------------------------------

N_GRID = (2.0, 2.5, 3.0, 4.0, 5.0)
P_GRID = (0.5, 1.0, 2.0, 4.0, 8.0)


def _kernel_abs(family, n, p, r):
    if family == Family.HFJ:
        return abs(kernels.eval_phi_J(n, p, r))
    if family == Family.E_DECAY:
        return abs(kernels.eval_E_decay(n, p, r))
    if family == Family.E_OSC:
        return abs(complex(kernels.eval_E_osc(n, p, r)))
    if family == Family.CONVDIFF_GEN:
        return abs(kernels.eval_convdiff_gen(n, p, (0.3, -0.2), 1.0, (r, 0.0)))
    return abs(complex(kernels.eval_plate_kernel(family, n, p, r)))


def test_2_continuity_and_divergence(verdict):
    t0 = time.perf_counter()
    bad = []
    for fam in (Family.HFJ, Family.WINKLER_GEN, Family.BERGER_GEN, Family.CONVDIFF_GEN):
        for n in N_GRID:
            for p in P_GRID:
                a, b = _kernel_abs(fam, n, p, 1e-8), _kernel_abs(fam, n, p, 1e-6)
                if not abs(a - b) < 1e-4 * b:
                    bad.append((fam.value, n, p))
    for fam in (Family.E_DECAY, Family.E_OSC, Family.WINKLER_FUND, Family.BERGER_FUND):
        for n in N_GRID:
            for p in P_GRID:
                f6, f3, f0 = (_kernel_abs(fam, n, p, r) for r in (1e-6, 1e-3, 1.0))
                if not f6 > f3 > f0:
                    bad.append((fam.value, n, p))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0
    detail = f"{200 - len(bad)}/200 cases, {elapsed:.2f} s"
    if bad:
        detail += "; failing: " + ", ".join(f"{f} n={n} p={p}" for f, n, p in bad[:10])
        if len(bad) > 10:
            detail += ", ..."
    verdict(2, "kernel continuity / divergence classification", ok, detail)
    assert ok


# -- 3 -------------------------------------------------------------------------

def test_3_n3_closed_forms(verdict):
    radii = np.linspace(0.05, 6.0, 20)
    lam, alpha, tau, v, D = 1.7, 0.9, 1.3, (0.4, -0.25, 0.1), 0.8
    worst = {}
    for r in radii:
        x = lam * r
        checks = {
            "EDecay": (kernels.eval_E_decay(3, lam, r), lam ** 2.5 * math.exp(-x) / (4 * math.pi * x)),
            "HFJ": (kernels.eval_phi_J(3, lam, r), lam ** 2.5 * math.sin(x) / (2 * math.pi ** 2 * x)),
            "BergerGen": (kernels.eval_plate_kernel(Family.BERGER_GEN, 3, alpha, r).re,
                          1 + 2 / alpha * math.sinh(alpha * r)),
        }
        d = np.array([0.6, 0.0, 0.8]) * r
        drift = math.exp(-float(np.dot(v, d)) / (2 * D))
        checks["ConvDiffGen"] = (kernels.eval_convdiff_gen(3, tau, v, D, d),
                                 drift * tau ** 2.5 * math.sinh(tau * r) / (2 * math.pi ** 2 * tau * r))
        for name, (got, want) in checks.items():
            worst[name] = max(worst.get(name, 0.0), rel(got, want))
    ok = all(e < 1e-9 for e in worst.values())
    verdict(3, "n = 3 closed forms", ok, ", ".join(f"{k} {e:.1e}" for k, e in worst.items()))
    assert ok


# -- 4 -------------------------------------------------------------------------

SIGNALS = {
    "a": lambda x: np.sin(x) + 0.5 * np.cos(3 * x),
    "b": lambda x: np.cos(2 * x + 0.4) - 0.7 * np.sin(5 * x),
    "c": lambda x: sum(math.exp(-k / 2) * np.cos(k * x + k) for k in range(1, 9)),
}


def transform_round_trip(signal):
    x = np.linspace(0, 2 * math.pi, 64)
    f = signal(x)
    spec = kernels.KernelSpec(Family.HFJ, 1)
    samples = SampleSet(x[:, None], f)
    grid = transform.analyze(samples, [[-1.0], [-2.5]], np.arange(1.0, 11.0), spec)
    lsq = transform.synthesize(grid, spec)
    ng = transform.calibrate_ng(grid, spec, samples)
    lit = transform.synthesize(grid, spec, mode="literal")
    return f, lsq, lit, ng


def test_4_transform_round_trip(verdict):
    errs, table = {}, []
    for name, sig in SIGNALS.items():
        f, lsq, lit, ng = transform_round_trip(sig)
        errs[name] = float(np.max(np.abs(lsq - f)))
        rms_rel = float(np.sqrt(np.mean((lit - lsq) ** 2)) / np.sqrt(np.mean(lsq ** 2)))
        table.append(f"{name}: N_g={ng:.4g} literal-vs-lsq RMS rel {rms_rel:.3g}")
    print("literal-mode table: " + "; ".join(table))
    ok = all(e < 1e-6 for e in errs.values())
    verdict(4, "1-D transform round trip", ok,
            "max err " + ", ".join(f"{k} {e:.1e}" for k, e in errs.items())
            + " | literal " + "; ".join(table))
    assert ok


# -- 5 -------------------------------------------------------------------------

def test_5_fractional_derivative(verdict):
    n = 128
    step = 2 * math.pi / n
    x = np.arange(n) * step
    e2 = np.max(np.abs(transform.frac_deriv_1d(np.sin(x), step, 2) + np.sin(x)))
    f = np.exp(np.sin(x)) - np.mean(np.exp(np.sin(x)))
    half = transform.frac_deriv_1d(transform.frac_deriv_1d(f, step, 0.5), step, 0.5)
    esg = np.max(np.abs(half - np.cos(x) * np.exp(np.sin(x))))
    g = np.cos(3 * x) + x * (2 * math.pi - x)
    e0 = np.max(np.abs(transform.frac_deriv_1d(g, step, 0) - g))
    ok = e2 < 1e-8 and esg < 1e-6 and e0 < 1e-12
    verdict(5, "fractional derivative", ok, f"m=2 {e2:.1e}, semigroup {esg:.1e}, m=0 {e0:.1e}")
    assert ok


# -- 6 -------------------------------------------------------------------------

def _poly_case(rng):
    C = rng.random((rng.integers(1, 5), 2))
    basis = BasisSpec("PolyDFW", C, nx=2, ny=2)
    a = rng.normal(size=(3, 3))
    target = lambda X: sum(a[i, j] * X[:, 0] ** i * X[:, 1] ** j for i in range(3) for j in range(3))
    return basis, target, 60


def _trig_case(rng):
    C = rng.random((3, 2))
    basis = BasisSpec("TrigDFW", C, nx=2, ny=1)
    terms = [(k, i, j, rng.normal()) for k in range(3) for i in (1, 2) for j in (0, 1)
             if rng.random() < 0.7]

    def target(X):
        out = np.zeros(X.shape[0])
        for k, i, j, a in terms:
            out += a * np.sin(2 * math.pi * i * (X[:, 0] - C[k, 0])) \
                * np.cos(2 * math.pi * j * (X[:, 1] - C[k, 1]))
        return out
    return basis, target, 80


def _mq_case(rng):
    C = rng.random((6, 2))
    s = rng.uniform(0.2, 0.6, 6)
    basis = BasisSpec("MQ", C, shapes=s)
    h = rng.normal(size=6)
    target = lambda X: sum(h[k] * np.sqrt(np.sum((X - C[k]) ** 2, axis=1) + s[k] ** 2)
                           for k in range(6))
    return basis, target, 60


def _winkler_case(rng):
    C = rng.random((3, 2))
    kap = (1.0 + rng.random(), 3.0 + rng.random())
    basis = BasisSpec("WinklerSeries", C, n=2, stiffness=kap)
    p = rng.normal(size=4)
    a = rng.normal(size=(2, 3, 2))

    def target(X):
        out = p[0] + p[1] * X[:, 0] + p[2] * X[:, 0] * X[:, 1] ** 2 + p[3] * X[:, 1] ** 3
        for q, kappa in enumerate(kap):
            for k in range(3):
                r = math.sqrt(kappa) * np.sqrt(np.sum((X - C[k]) ** 2, axis=1))
                out += a[q, k, 0] * specfun.kelvin("ber", 0, r) + a[q, k, 1] * specfun.kelvin("bei", 0, r)
        return out
    return basis, target, 80


CASES = {"PolyDFW": _poly_case, "TrigDFW": _trig_case, "MQ": _mq_case, "WinklerSeries": _winkler_case}


def _permuted(basis, perm):
    C = basis.center_array[perm]
    kw = {}
    if basis.family == "MQ":
        kw["shapes"] = tuple(np.asarray(basis.shapes)[perm])
    return BasisSpec.from_dict({**basis.to_dict(), "centers": C.tolist(), **kw})


def test_6_series_reproduction(verdict):
    rng = np.random.default_rng(606)
    worst_fit, worst_perm = {}, {}
    for name, make in CASES.items():
        for trial in range(20):
            basis, target, m = make(rng)
            X = rng.random((m, 2))
            model = approx.fit_series(basis, SampleSet(X, target(X)))
            res = np.max(np.abs(approx.predict(model, X) - target(X)))
            worst_fit[name] = max(worst_fit.get(name, 0.0), res)
            if trial < 5:
                ps = rng.permutation(m)
                pc = rng.permutation(len(basis.centers))
                m2 = approx.fit_series(_permuted(basis, pc), SampleSet(X[ps], target(X)[ps]))
                Z = rng.random((50, 2))
                d = np.max(np.abs(approx.predict(model, Z) - approx.predict(m2, Z)))
                worst_perm[name] = max(worst_perm.get(name, 0.0), d)
    ok = all(v < 1e-8 for v in worst_fit.values()) and all(v < 1e-8 for v in worst_perm.values())
    verdict(6, "series reproduction and permutation invariance", ok,
            "residual " + ", ".join(f"{k} {v:.1e}" for k, v in worst_fit.items())
            + "; permutation " + ", ".join(f"{k} {v:.1e}" for k, v in worst_perm.items()))
    assert ok


# -- 7 -------------------------------------------------------------------------

def franke_rms_errors(counts=(9, 16, 25), seed=7):
    rng = np.random.default_rng(seed)
    X = rng.random((200, 2))
    f = cli.franke(X[:, 0], X[:, 1])
    g = np.linspace(0, 1, 41)
    T = np.array([(a, b) for a in g for b in g])
    ft = cli.franke(T[:, 0], T[:, 1])
    out = []
    for m in counts:
        k = int(round(math.sqrt(m)))
        c = np.linspace(0, 1, k)
        C = np.array([(a, b) for a in c for b in c])
        model = approx.fit_series(BasisSpec("PolyDFW", C, nx=2, ny=2), SampleSet(X, f))
        out.append((m, float(np.sqrt(np.mean((approx.predict(model, T) - ft) ** 2))), model.rank))
    return out


def test_7_franke_convergence(verdict):
    t0 = time.perf_counter()
    rows = franke_rms_errors()
    elapsed = time.perf_counter() - t0
    errs = [e for _, e, _ in rows]
    ok = errs[0] > errs[1] > errs[2] and elapsed < 10
    verdict(7, "Franke RMS strictly decreasing over M = 9, 16, 25", ok,
            ", ".join(f"M={m}: RMS {e:.16g} rank {r}" for m, e, r in rows) + f", {elapsed:.2f} s")
    assert ok


# -- 8 -------------------------------------------------------------------------

def unit_square_knots(per_side=8):
    s = np.arange(per_side) / per_side
    z, o = np.zeros_like(s), np.ones_like(s)
    return np.concatenate([np.c_[s, z], np.c_[o, s], np.c_[1 - s, o], np.c_[z, 1 - s]])


def disk_knots(m, radius=1.0):
    t = 2 * math.pi * np.arange(m) / m
    return radius * np.c_[np.cos(t), np.sin(t)]


def disk_probes(count, radius, seed):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    t = 2 * math.pi * rng.random(count)
    return np.c_[r * np.cos(t), r * np.sin(t)]


def convdiff_case():
    v, D, k = (1.0, 0.0), 1.0, 0.0
    tau = kernels.tau_from_drift(v, D, k)
    d = np.array([math.cos(math.pi / 3), math.sin(math.pi / 3)])
    exact = lambda X: kernels.drift_factor(v, D, X) * np.exp(tau * (X @ d))
    probes = 0.1 + 0.8 * np.random.default_rng(88).random((50, 2))
    B = unit_square_knots()
    return v, D, k, tau, exact, B, probes


def test_8_pde_solvers(verdict):
    t0 = time.perf_counter()
    tau = 1.0
    B = disk_knots(32)
    P = disk_probes(50, 0.9, 8)
    mh = pdesolve.solve_modified_helmholtz(BoundaryProblem(B, np.exp(tau * B[:, 0])), tau)
    mh_err = float(np.max(np.abs(mh.predict(P) - np.exp(tau * P[:, 0]))))

    v, D, k, _, exact, Bs, Ps = convdiff_case()
    cd = pdesolve.solve_convdiff(BoundaryProblem(Bs, exact(Bs)), v, D, k)
    spec = PdeSpec("ConvectionDiffusion", velocity=v, diffusivity=D, reaction=k)
    cd_res = float(np.max(pdesolve.residuals(cd, spec, Ps)))

    kk = 2.25
    data = BoundaryProblem(B, np.exp(1.5 * B[:, 0]))
    a = pdesolve.solve_convdiff(data, (0.0, 0.0), 1.0, kk)
    b = pdesolve.solve_modified_helmholtz(data, kernels.tau_from_drift((0.0, 0.0), 1.0, kk))
    bitwise = (np.array_equal(a.coeffs, b.coeffs)
               and np.array_equal(a.predict(P), b.predict(P)))
    elapsed = time.perf_counter() - t0
    ok = mh_err < 1e-6 and cd_res < 1e-4 and bitwise and elapsed < 10
    verdict(8, "PDE solvers", ok, f"MH interior err {mh_err:.1e}, CD FD residual {cd_res:.1e}, "
            f"v=0 bitwise {bitwise}, {elapsed:.2f} s")
    assert ok


# -- 9 -------------------------------------------------------------------------

def test_9_transform_consistency(verdict):
    D, kappa = 0.7, 1.9
    tau_exact = kernels.tau_from_drift((0.0, 0.0), D, kappa) == math.sqrt(kappa / D)

    v, D, k, tau, exact, B, P = convdiff_case()
    w_data = exact(B) / kernels.drift_factor(v, D, B)
    w_model = pdesolve.solve_modified_helmholtz(BoundaryProblem(B, w_data), tau)
    u_model = pdesolve.to_convdiff_model(w_model, v, D)
    rw = np.max(pdesolve.residuals(w_model, PdeSpec("ModifiedHelmholtz", tau=tau), P))
    ru = np.max(pdesolve.residuals(
        u_model, PdeSpec("ConvectionDiffusion", velocity=v, diffusivity=D, reaction=k), P))
    ratio = float(ru / rw)
    ok = tau_exact and ratio <= 10
    verdict(9, "exponential-transform consistency", ok,
            f"tau exact {tau_exact}, inflation {ratio:.3g} (u {ru:.1e} / w {rw:.1e})")
    assert ok


# -- 10 ------------------------------------------------------------------------

def _run_all_configs(workdir, outname):
    cfg_dir = os.path.join(workdir, "configs")
    names = sorted(f for f in os.listdir(cfg_dir) if f.endswith(".json"))
    # residual-check reads the model written by solve
    names.sort(key=lambda f: f.startswith("residual"))
    codes = {}
    for f in names:
        stem = f[:-5]
        out = os.path.join(workdir, outname, stem)
        codes[f] = cli.main(["--config", os.path.join(cfg_dir, f), "--output", out])
    return codes


def _snapshot(root):
    files = {}
    for dirpath, _, fnames in os.walk(root):
        for f in fnames:
            p = os.path.join(dirpath, f)
            with open(p, "rb") as fh:
                files[os.path.relpath(p, root)] = fh.read()
    return files


def test_10_cli_determinism(verdict, tmp_path):
    shutil.copytree(CONFIG_DIR, tmp_path / "configs")
    first = _run_all_configs(str(tmp_path), "out")
    a = _snapshot(tmp_path / "out")
    shutil.rmtree(tmp_path / "out")
    second = _run_all_configs(str(tmp_path), "out")
    b = _snapshot(tmp_path / "out")
    ok = (all(c == 0 for c in first.values()) and first == second and a == b and len(a) > 0)
    verdict(10, "CLI determinism", ok, f"{len(first)} configs, {len(a)} files, exit codes "
            + ", ".join(f"{k}={v}" for k, v in first.items()))
    assert ok
