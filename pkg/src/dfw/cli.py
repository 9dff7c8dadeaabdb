"""``dfw`` command-line driver.

    dfw [COMMAND] --config CONFIG.json --output DIR [--seed N] [--verbose]

The config file holds every numerical parameter; COMMAND, if given, must match
its ``command`` field.  Outputs are CSV (numeric tables, complex values as
``_re``/``_im`` column pairs, floats in shortest round-trip form) and JSON
(sorted keys, ``"dfw-schema": 1``).  Identical inputs give identical bytes.

Exit status: 0 success, 1 usage or config error, 2 numerical failure,
3 I/O error.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import jsonschema
import numpy as np

from . import approx, kernels, pdesolve, transform
from .errors import DFWError, NumericalError, SingularityError

SCHEMA_VERSION = 1
COMMANDS = ("kernel-table", "transform", "fit", "solve", "residual-check")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("dfw")


class ConfigError(Exception):
    pass


# -- schema -------------------------------------------------------------------

_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM, "minItems": 1}
_POINTS_LIST = {"type": "array", "items": {"anyOf": [_NUM, _VEC]}, "minItems": 1}

POINTS = {
    "oneOf": [
        _POINTS_LIST,
        {"type": "object", "additionalProperties": False, "required": ["grid"],
         "properties": {"grid": {"type": "object", "required": ["low", "high", "num"],
                                 "additionalProperties": False,
                                 "properties": {"low": _VEC, "high": _VEC,
                                                "num": {"type": "array", "minItems": 1,
                                                        "items": {"type": "integer",
                                                                  "minimum": 1}}}}}},
        {"type": "object", "additionalProperties": False, "required": ["random"],
         "properties": {"random": {"type": "object", "required": ["count", "low", "high"],
                                   "additionalProperties": False,
                                   "properties": {"count": {"type": "integer", "minimum": 1},
                                                  "low": _VEC, "high": _VEC}}}},
        {"type": "object", "additionalProperties": False, "required": ["circle"],
         "properties": {"circle": {"type": "object", "required": ["count"],
                                   "additionalProperties": False,
                                   "properties": {"count": {"type": "integer", "minimum": 1},
                                                  "radius": _NUM, "center": _VEC}}}},
        {"type": "object", "additionalProperties": False, "required": ["disk_random"],
         "properties": {"disk_random": {"type": "object", "required": ["count", "radius"],
                                        "additionalProperties": False,
                                        "properties": {"count": {"type": "integer", "minimum": 1},
                                                       "radius": _NUM, "center": _VEC}}}},
        {"type": "object", "additionalProperties": False, "required": ["square_boundary"],
         "properties": {"square_boundary": {
             "type": "object", "required": ["per_side"], "additionalProperties": False,
             "properties": {"per_side": {"type": "integer", "minimum": 1},
                            "low": _VEC, "high": _VEC}}}},
        {"type": "object", "additionalProperties": False, "required": ["csv"],
         "properties": {"csv": {"type": "string"}}},
    ]
}

DRIFT = {"type": "object", "required": ["velocity", "diffusivity"], "additionalProperties": False,
         "properties": {"velocity": _VEC, "diffusivity": _NUM}}

KERNEL = {
    "type": "object", "required": ["family", "n"], "additionalProperties": False,
    "properties": {"family": {"enum": [f.value for f in kernels.Family]}, "n": _NUM,
                   "scale": _NUM, "norm": _NUM, "drift": DRIFT},
}

METRIC = {
    "type": "object", "additionalProperties": False,
    "properties": {"mode": {"enum": ["isotropic", "anisotropic"]}, "weights": _VEC},
}

TARGET = {
    "type": "object", "required": ["kind"],
    "properties": {"kind": {"enum": ["values", "trig", "polynomial", "franke", "exp_plane",
                                     "kernel", "winkler"]}},
    "allOf": [
        {"if": {"properties": {"kind": {"const": "values"}}},
         "then": {"required": ["values"], "properties": {"values": _VEC}}},
        {"if": {"properties": {"kind": {"const": "trig"}}},
         "then": {"required": ["terms"],
                  "properties": {"terms": {"type": "array", "minItems": 1,
                                           "items": {"type": "array", "items": _NUM,
                                                     "minItems": 3, "maxItems": 3}}}}},
        {"if": {"properties": {"kind": {"const": "polynomial"}}},
         "then": {"required": ["terms"],
                  "properties": {"terms": {"type": "array", "minItems": 1,
                                           "items": {"type": "array", "items": _NUM,
                                                     "minItems": 3, "maxItems": 3}}}}},
        {"if": {"properties": {"kind": {"const": "exp_plane"}}},
         "then": {"required": ["tau", "direction"],
                  "properties": {"tau": _NUM, "direction": _VEC, "velocity": _VEC,
                                 "diffusivity": _NUM}}},
        {"if": {"properties": {"kind": {"const": "kernel"}}},
         "then": {"required": ["kernel", "center"],
                  "properties": {"kernel": KERNEL, "center": _VEC,
                                 "part": {"enum": ["re", "im"]}}}},
        {"if": {"properties": {"kind": {"const": "winkler"}}},
         "then": {"required": ["kappa", "centers", "ber", "bei"],
                  "properties": {"kappa": _NUM, "centers": _POINTS_LIST,
                                 "ber": _VEC, "bei": _VEC, "n": _NUM}}},
    ],
}

BASIS = {
    "type": "object", "required": ["family", "centers"],
    "properties": {"family": {"enum": list(approx.FAMILIES[:-1])}, "centers": POINTS,
                   "nx": {"type": "integer", "minimum": 0},
                   "ny": {"type": "integer", "minimum": 0},
                   "degree": {"type": "integer", "minimum": 0},
                   "shapes": _VEC, "velocity": _VEC, "diffusivity": _NUM,
                   "variant": {"enum": ["exponential", "general"]}, "n": _NUM, "tau": _NUM,
                   "stiffness": _VEC, "monomials": {"type": "boolean"}},
    "additionalProperties": False,
}

PDE = {
    "type": "object", "required": ["operator"], "additionalProperties": False,
    "properties": {"operator": {"enum": list(pdesolve.OPERATORS)}, "n": _NUM, "tau": _NUM,
                   "velocity": _VEC, "diffusivity": _NUM, "reaction": _NUM, "kappa": _NUM},
}

_COMMON = {"dfw-schema": {"const": SCHEMA_VERSION}, "command": {"enum": list(COMMANDS)},
           "seed": {"type": "integer"}, "description": {"type": "string"}}

_COMMAND_PROPS = {
    "kernel-table": ({"kernel": KERNEL, "radii": _VEC, "scales": _VEC, "direction": _VEC},
                     ["kernel", "radii"]),
    "transform": ({"kernel": KERNEL, "metric": METRIC, "samples": POINTS, "target": TARGET,
                   "weights": _VEC, "centers": POINTS, "scales": _VEC,
                   "mode": {"enum": ["least_squares", "literal", "both"]},
                   "ridge": {"type": "number", "minimum": 0}, "ng": _NUM},
                  ["kernel", "samples", "target", "centers", "scales"]),
    "fit": ({"basis": BASIS, "samples": POINTS, "target": TARGET, "test_points": POINTS,
             "rank_tol": {"type": "number", "minimum": 0},
             "threshold": {"type": "number", "minimum": 0}},
            ["basis", "samples", "target"]),
    "solve": ({"pde": PDE, "boundary": POINTS, "target": TARGET, "probes": POINTS,
               "method": {"enum": ["direct", "transform"]},
               "include_monomials": {"type": "boolean"},
               "rank_tol": {"type": "number", "minimum": 0},
               "h": {"type": "number", "exclusiveMinimum": 0}},
              ["pde", "boundary", "target"]),
    "residual-check": ({"model": {"type": "string"}, "pde": PDE, "probes": POINTS,
                        "h": {"type": "number", "exclusiveMinimum": 0}},
                       ["model", "pde", "probes"]),
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dfw-schema", "command"],
    "properties": {"command": {"enum": list(COMMANDS)}},
    "allOf": [
        {"if": {"properties": {"command": {"const": name}}},
         "then": {"properties": {**_COMMON, **props}, "required": req,
                  "additionalProperties": False}}
        for name, (props, req) in _COMMAND_PROPS.items()
    ],
}


def validate_config(cfg):
    """Raise ConfigError naming the offending field."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        e = jsonschema.exceptions.best_match(errors)
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"config field {path}: {e.message}")


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    validate_config(cfg)
    return cfg


# -- config interpretation -----------------------------------------------------

def _rng(ctx):
    return np.random.default_rng(ctx["seed"])


def make_points(spec, ctx):
    if isinstance(spec, list):
        return kernels.as_points(spec)
    if "grid" in spec:
        g = spec["grid"]
        if not len(g["low"]) == len(g["high"]) == len(g["num"]):
            raise ConfigError("grid low/high/num lengths differ")
        axes = [np.linspace(lo, hi, n) for lo, hi, n in zip(g["low"], g["high"], g["num"])]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([m.reshape(-1) for m in mesh])
    if "random" in spec:
        r = spec["random"]
        lo, hi = np.asarray(r["low"], float), np.asarray(r["high"], float)
        if lo.shape != hi.shape:
            raise ConfigError("random low/high lengths differ")
        return lo + (hi - lo) * _rng(ctx).random((r["count"], lo.size))
    if "circle" in spec:
        c = spec["circle"]
        t = 2 * math.pi * np.arange(c["count"]) / c["count"]
        rad = c.get("radius", 1.0)
        ctr = np.asarray(c.get("center", [0.0, 0.0]), float)
        return ctr + rad * np.column_stack([np.cos(t), np.sin(t)])
    if "disk_random" in spec:
        c = spec["disk_random"]
        g = _rng(ctx)
        r = c["radius"] * np.sqrt(g.random(c["count"]))
        t = 2 * math.pi * g.random(c["count"])
        ctr = np.asarray(c.get("center", [0.0, 0.0]), float)
        return ctr + np.column_stack([r * np.cos(t), r * np.sin(t)])
    if "square_boundary" in spec:
        c = spec["square_boundary"]
        lo = np.asarray(c.get("low", [0.0, 0.0]), float)
        hi = np.asarray(c.get("high", [1.0, 1.0]), float)
        s = np.arange(c["per_side"]) / c["per_side"]
        unit = np.concatenate([np.column_stack([s, 0 * s]), np.column_stack([1 + 0 * s, s]),
                               np.column_stack([1 - s, 1 + 0 * s]), np.column_stack([0 * s, 1 - s])])
        return lo + (hi - lo) * unit
    if "csv" in spec:
        return read_points_csv(os.path.join(ctx["base"], spec["csv"]))
    raise ConfigError("unrecognised point specification")


def read_points_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ConfigError(f"{path}: need a header and at least one row")
    try:
        return kernels.as_points([[float(v) for v in row] for row in rows[1:]])
    except ValueError as e:
        raise ConfigError(f"{path}: {e}")


def franke(x, y):
    return (0.75 * np.exp(-((9 * x - 2) ** 2 + (9 * y - 2) ** 2) / 4)
            + 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - (9 * y + 1) / 10)
            + 0.5 * np.exp(-((9 * x - 7) ** 2 + (9 * y - 3) ** 2) / 4)
            - 0.2 * np.exp(-(9 * x - 4) ** 2 - (9 * y - 7) ** 2))


def make_target(spec, X):
    """Target values at X; for the plate target returns (u, lap u)."""
    kind = spec["kind"]
    if kind == "values":
        v = np.asarray(spec["values"], float)
        if v.size != X.shape[0]:
            raise ConfigError(f"target has {v.size} values for {X.shape[0]} points")
        return v
    if kind == "trig":
        return sum(a * np.cos(w * X[:, 0] + p) for a, w, p in spec["terms"])
    if kind == "polynomial":
        if X.shape[1] != 2:
            raise ConfigError("polynomial targets are 2-D")
        return sum(c * X[:, 0] ** int(i) * X[:, 1] ** int(j) for c, i, j in spec["terms"])
    if kind == "franke":
        if X.shape[1] != 2:
            raise ConfigError("the Franke target is 2-D")
        return franke(X[:, 0], X[:, 1])
    if kind == "exp_plane":
        d = np.asarray(spec["direction"], float)
        if d.size != X.shape[1]:
            raise ConfigError("direction dimension does not match the points")
        w = np.exp(spec["tau"] * (X @ d))
        if "velocity" in spec:
            w = w * kernels.drift_factor(spec["velocity"], spec.get("diffusivity", 1.0), X)
        return w
    if kind == "kernel":
        ks = kernels.KernelSpec.from_dict(spec["kernel"])
        vals = ks.matrix(X, [spec["center"]])[:, 0]
        return vals.imag if spec.get("part") == "im" else np.real(vals)
    if kind == "winkler":
        kappa = spec["kappa"]
        C = kernels.as_points(spec["centers"])
        n = spec.get("n", X.shape[1])
        if not len(spec["ber"]) == len(spec["bei"]) == C.shape[0]:
            raise ConfigError("winkler target needs one ber and one bei weight per center")
        W = kernels.radial(kernels.Family.WINKLER_GEN, n, math.sqrt(kappa),
                           kernels.pairwise_distance(kernels.ISOTROPIC, X, C))
        a, b = np.asarray(spec["ber"], float), np.asarray(spec["bei"], float)
        u = W.real @ a + W.imag @ b
        lap = kappa * (-(W.imag @ a) + W.real @ b)
        return u, lap
    raise ConfigError(f"unknown target kind {kind!r}")


# -- output helpers --------------------------------------------------------------

def fmt(x):
    return repr(float(x))


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def write_json(path, obj):
    doc = {"dfw-schema": SCHEMA_VERSION, **_jsonable(obj)}
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("dfw-schema") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: missing or unsupported dfw-schema version")
    return doc


def _coord_header(dim, prefix="x"):
    return [f"{prefix}{i}" for i in range(dim)]


# -- commands ------------------------------------------------------------------------

def cmd_kernel_table(cfg, ctx):
    ks = kernels.KernelSpec.from_dict(cfg["kernel"])
    radii = np.asarray(cfg["radii"], float)
    scales = cfg.get("scales", [ks.scale])
    rows = []
    for s in scales:
        if ks.family is kernels.Family.CONVDIFF_GEN:
            d = np.asarray(cfg.get("direction", [1.0] + [0.0] * (len(ks.drift.velocity) - 1)), float)
            if d.size != len(ks.drift.velocity):
                raise ConfigError("direction dimension does not match the drift velocity")
            d = d / np.linalg.norm(d)
            vals = ks.radial(radii, s) * kernels.drift_factor(
                ks.drift.velocity, ks.drift.diffusivity, radii[:, None] * d[None, :])
        else:
            vals = ks.radial(radii, s)
        vals = np.asarray(vals, dtype=complex)
        rows += [(float(r), float(s), v.real, v.imag) for r, v in zip(radii, vals)]
    write_csv(os.path.join(ctx["out"], "kernel_table.csv"),
              ["r", "scale", "value_re", "value_im"], rows)
    return {"rows": len(rows)}


def cmd_transform(cfg, ctx):
    ks = kernels.KernelSpec.from_dict(cfg["kernel"])
    metric = kernels.DistanceMetric.from_dict(cfg.get("metric", {}))
    X = make_points(cfg["samples"], ctx)
    f = make_target(cfg["target"], X)
    samples = transform.SampleSet(X, f, cfg.get("weights"))
    C = make_points(cfg["centers"], ctx)
    grid = transform.analyze(samples, C, cfg["scales"], ks, metric)
    rows = []
    for j, lam in enumerate(grid.scales):
        for l, c in enumerate(grid.centers):
            rows.append((j, l, float(lam), *map(float, c),
                         grid.coeffs[j, l].real, grid.coeffs[j, l].imag))
    write_csv(os.path.join(ctx["out"], "grid.csv"),
              ["scale_index", "center_index", "scale", *_coord_header(C.shape[1], "c"),
               "coeff_re", "coeff_im"], rows)
    mode = cfg.get("mode", "least_squares")
    report = {"kernel": ks.to_dict(), "metric": metric.to_dict(), "mode": mode,
              "n_samples": len(samples), "n_scales": int(grid.scales.size),
              "n_centers": int(grid.centers.shape[0])}
    header = [*_coord_header(X.shape[1]), "value"]
    cols = [X[:, i] for i in range(X.shape[1])] + [f]
    if mode in ("least_squares", "both"):
        rec = np.asarray(transform.synthesize(grid, ks, metric, X, "least_squares",
                                              cfg.get("ridge")), dtype=complex)
        header += ["lsq_re", "lsq_im"]
        cols += [rec.real, rec.imag]
        report["lsq_max_error"] = float(np.max(np.abs(rec - f)))
    if mode in ("literal", "both"):
        ng = cfg.get("ng")
        if ng is None:
            ng = transform.calibrate_ng(grid, ks, samples, metric)
        lit = np.asarray(transform.synthesize(grid, ks, metric, X, "literal", ng=ng), dtype=complex)
        header += ["literal_re", "literal_im"]
        cols += [lit.real, lit.imag]
        report["ng"] = float(ng)
        report["literal_max_error"] = float(np.max(np.abs(lit - f)))
        report["literal_rms_error"] = float(np.sqrt(np.mean(np.abs(lit - f) ** 2)))
    write_csv(os.path.join(ctx["out"], "reconstruction.csv"), header,
              [tuple(float(c[i]) for c in cols) for i in range(X.shape[0])])
    report["grid"] = grid.to_dict()
    write_json(os.path.join(ctx["out"], "grid.json"), report)
    return report


def _basis_from_cfg(cfg, ctx):
    d = dict(cfg)
    d["centers"] = tuple(map(tuple, make_points(d["centers"], ctx)))
    return approx.BasisSpec.from_dict(d)


def cmd_fit(cfg, ctx):
    basis = _basis_from_cfg(cfg["basis"], ctx)
    X = make_points(cfg["samples"], ctx)
    f = make_target(cfg["target"], X)
    model = approx.fit_series(basis, transform.SampleSet(X, f), cfg.get("rank_tol", approx.RANK_TOL))
    report = {"diagnostics": model.diagnostics(), "n_samples": int(X.shape[0])}
    if "threshold" in cfg:
        model, info = approx.threshold_coefficients(model, transform.SampleSet(X, f), cfg["threshold"])
        report["threshold"] = info
    res = approx.predict(model, X) - f
    report["sample_max_residual"] = float(np.max(np.abs(res)))
    report["sample_rms_residual"] = float(np.sqrt(np.mean(res ** 2)))
    if "test_points" in cfg:
        T = make_points(cfg["test_points"], ctx)
        e = approx.predict(model, T) - make_target(cfg["target"], T)
        report["test_max_error"] = float(np.max(np.abs(e)))
        report["test_rms_error"] = float(np.sqrt(np.mean(e ** 2)))
    write_json(os.path.join(ctx["out"], "model.json"), {"model": model.to_dict()})
    write_json(os.path.join(ctx["out"], "report.json"), report)
    return report


def cmd_solve(cfg, ctx):
    spec = pdesolve.PdeSpec.from_dict(cfg["pde"])
    B = make_points(cfg["boundary"], ctx)
    target = cfg["target"]
    probes = make_points(cfg["probes"], ctx) if "probes" in cfg else None
    rank_tol = cfg.get("rank_tol", pdesolve.RANK_TOL)
    if spec.operator == "WinklerPlate":
        if target["kind"] != "winkler":
            raise ConfigError("plate problems need a 'winkler' target (u and its Laplacian)")
        u, lap = make_target(target, B)
        prob = pdesolve.BoundaryProblem(B, u, probes, lap)
        model = pdesolve.solve_winkler_plate(prob, spec.kappa, spec.n,
                                             cfg.get("include_monomials", False), rank_tol)
    else:
        u = make_target(target, B)
        if isinstance(u, tuple):
            raise ConfigError("the 'winkler' target is for plate problems only")
        prob = pdesolve.BoundaryProblem(B, u, probes)
        if spec.operator == "ModifiedHelmholtz":
            model = pdesolve.solve_modified_helmholtz(prob, spec.tau, spec.n, rank_tol)
        else:
            model = pdesolve.solve_convdiff(prob, spec.velocity, spec.diffusivity, spec.reaction,
                                            spec.n, cfg.get("method", "direct"), rank_tol)
    report = {"pde": spec.to_dict(), "diagnostics": model.diagnostics(),
              "boundary_residual_max": model.max_residual}
    if probes is not None:
        exact = make_target(target, probes)
        exact = exact[0] if isinstance(exact, tuple) else exact
        pred = model.predict(probes)
        res = pdesolve.residuals(model, spec, probes, cfg.get("h"))
        report["interior_max_error"] = float(np.max(np.abs(pred - exact)))
        report["interior_max_pde_residual"] = float(np.max(res))
        write_csv(os.path.join(ctx["out"], "probes.csv"),
                  [*_coord_header(probes.shape[1]), "u", "exact", "pde_residual"],
                  [(*map(float, p), float(a), float(b), float(r))
                   for p, a, b, r in zip(probes, pred, exact, res)])
    write_json(os.path.join(ctx["out"], "model.json"), {"model": model.to_dict()})
    write_json(os.path.join(ctx["out"], "report.json"), report)
    return report


def cmd_residual_check(cfg, ctx):
    doc = read_json(os.path.join(ctx["base"], cfg["model"]))
    model = approx.SeriesModel.from_dict(doc["model"])
    spec = pdesolve.PdeSpec.from_dict(cfg["pde"])
    P = make_points(cfg["probes"], ctx)
    res = pdesolve.residuals(model, spec, P, cfg.get("h"))
    write_csv(os.path.join(ctx["out"], "residuals.csv"),
              [*_coord_header(P.shape[1]), "residual"],
              [(*map(float, p), float(r)) for p, r in zip(P, res)])
    return {"max_residual": float(np.max(res))}


HANDLERS = {"kernel-table": cmd_kernel_table, "transform": cmd_transform, "fit": cmd_fit,
            "solve": cmd_solve, "residual-check": cmd_residual_check}


def run(config, output, seed=None, command=None, base="."):
    """Execute a parsed config dict, writing into ``output``.  Returns the
    command's summary dict; raises on failure."""
    validate_config(config)
    if command is not None and command != config["command"]:
        raise ConfigError(f"command {command!r} does not match config command {config['command']!r}")
    ctx = {"seed": seed if seed is not None else config.get("seed", 0),
           "out": output, "base": base}
    os.makedirs(output, exist_ok=True)
    return HANDLERS[config["command"]](config, ctx)


def build_parser():
    p = argparse.ArgumentParser(prog="dfw", description=__doc__.split("\n\n")[0])
    p.add_argument("command", nargs="?", choices=COMMANDS,
                   help="optional; must match the config's command field")
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--output", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: config seed or 0)")
    p.add_argument("--verbose", action="store_true")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="dfw: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config)
        summary = run(cfg, args.output, args.seed, args.command,
                      os.path.dirname(os.path.abspath(args.config)))
        log.info("%s finished: %s", cfg["command"],
                 json.dumps(_jsonable({k: v for k, v in summary.items() if k != "grid"}),
                            sort_keys=True))
        return EXIT_OK
    except ConfigError as e:
        print(f"dfw: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularityError, NumericalError) as e:
        print(f"dfw: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except DFWError as e:
        print(f"dfw: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"dfw: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
