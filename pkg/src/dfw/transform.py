"""Discrete distance-function analysis and synthesis, and 1-D spectral
fractional differentiation.

Analysis is the plain weighted sum

    F[j, l] = sum_k w_k f(x_k) phi(lam_j * dist(xi_l, x_k))

with w_k = 1 when no weights are given.

Synthesis has two modes.

``least_squares`` (default) treats the grid as the right-hand side of the
ridge-regularised normal equations.  With B[k, (j, l)] = conj(phi(lam_j
dist(x_k, xi_l))) and W = diag(w) we have F = B^H W f, so the coefficients of

    min_c |W^(1/2) (B c - f)|^2 + ridge |c|^2

solve (B^H W B + ridge I) c = F and can be found from the grid alone.  For the
real families conj() is a no-op and B is the plain synthesis matrix.

``literal`` evaluates (1/N_g) sum_j sum_l F[j, l] phi(lam_j dist(x, xi_l)).
The normalisation N_g has no closed form; ``calibrate_ng`` fits it.
"""

import dataclasses
import math

import numpy as np

from .errors import DomainError, RankError, ShapeError
from .kernels import ISOTROPIC, as_points

RIDGE_FACTOR = 1e-10


@dataclasses.dataclass(frozen=True)
class SampleSet:
    points: np.ndarray
    values: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        pts = as_points(self.points)
        vals = np.asarray(self.values)
        if vals.ndim != 1:
            vals = vals.reshape(-1)
        if not np.iscomplexobj(vals):
            vals = vals.astype(np.float64)
        if vals.shape[0] != pts.shape[0]:
            raise ShapeError(f"{pts.shape[0]} points but {vals.shape[0]} values")
        if pts.shape[0] == 0:
            raise ShapeError("sample set is empty")
        if not np.all(np.isfinite(vals)):
            raise DomainError("sample values must be finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
            if w.shape[0] != pts.shape[0]:
                raise ShapeError(f"{pts.shape[0]} points but {w.shape[0]} weights")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise DomainError("quadrature weights must be finite and > 0")
            object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.points.shape[0]

    def weight_vector(self):
        return np.ones(len(self)) if self.weights is None else self.weights


@dataclasses.dataclass
class CoefficientGrid:
    """Analysis output.  ``coeffs[j, l]`` belongs to scale j and center l.

    ``sample_points``/``sample_weights`` record where the analysis sampled;
    ``ng`` holds a calibrated or supplied normalisation for literal synthesis.
    """

    scales: np.ndarray
    centers: np.ndarray
    coeffs: np.ndarray
    sample_points: np.ndarray | None = None
    sample_weights: np.ndarray | None = None
    real_values: bool = False
    ng: float | None = None
    _synthesis: dict = dataclasses.field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.scales = np.asarray(self.scales, dtype=np.float64).reshape(-1)
        self.centers = as_points(self.centers)
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.scales.size, self.centers.shape[0]):
            raise ShapeError(f"coeffs shape {self.coeffs.shape} does not match "
                             f"{self.scales.size} scales x {self.centers.shape[0]} centers")
        if not np.all(np.isfinite(self.coeffs)):
            raise DomainError("coefficients must be finite")
        if np.any(self.scales <= 0):
            raise DomainError("scales must be > 0")

    def to_dict(self):
        d = {
            "scales": self.scales.tolist(),
            "centers": self.centers.tolist(),
            "coeffs_re": self.coeffs.real.tolist(),
            "coeffs_im": self.coeffs.imag.tolist(),
            "real_values": self.real_values,
            "ng": self.ng,
        }
        if self.sample_points is not None:
            d["sample_points"] = self.sample_points.tolist()
            d["sample_weights"] = self.sample_weights.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        coeffs = np.asarray(d["coeffs_re"]) + 1j * np.asarray(d["coeffs_im"])
        sp = d.get("sample_points")
        sw = d.get("sample_weights")
        return cls(np.asarray(d["scales"]), np.asarray(d["centers"]), coeffs,
                   None if sp is None else np.asarray(sp, dtype=np.float64),
                   None if sw is None else np.asarray(sw, dtype=np.float64),
                   bool(d.get("real_values", False)), d.get("ng"))


def _basis(spec, metric, points, centers, scales):
    """(len(points), M * N) matrix, columns ordered scale-major."""
    blocks = [spec.matrix(points, centers, metric, scale=s) for s in scales]
    return np.concatenate(blocks, axis=1)


def analyze(samples, centers, scales, spec, metric=ISOTROPIC):
    """Weighted analysis sum for every (scale, center) pair."""
    centers = as_points(centers)
    scales = np.asarray(scales, dtype=np.float64).reshape(-1)
    if scales.size == 0 or centers.shape[0] == 0:
        raise ShapeError("need at least one scale and one center")
    if np.any(scales <= 0) or not np.all(np.isfinite(scales)):
        raise DomainError("scales must be finite and > 0")
    if centers.shape[1] != samples.points.shape[1]:
        raise ShapeError("centers and samples differ in dimension")
    wf = samples.weight_vector() * samples.values
    coeffs = np.empty((scales.size, centers.shape[0]), dtype=complex)
    for j, lam in enumerate(scales):
        K = spec.matrix(samples.points, centers, metric, scale=lam)
        # fixed-order reduction over samples, no BLAS
        coeffs[j] = np.sum(wf[:, None] * K, axis=0)
    return CoefficientGrid(scales, centers, coeffs, samples.points.copy(),
                           samples.weight_vector().copy(),
                           real_values=not np.iscomplexobj(samples.values))


def _synthesis_coefficients(grid, spec, metric, ridge):
    key = (spec, metric, ridge)
    cached = grid._synthesis.get(key)
    if cached is not None:
        return cached
    if grid.sample_points is None:
        raise ShapeError("least-squares synthesis needs the grid's sample points")
    B = np.conj(_basis(spec, metric, grid.sample_points, grid.centers, grid.scales))
    sw = np.sqrt(grid.sample_weights)
    A = sw[:, None] * B
    if ridge is None:
        ridge = RIDGE_FACTOR * np.linalg.norm(A)
    if ridge < 0:
        raise DomainError("ridge must be >= 0")
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise RankError("synthesis matrix has rank zero")
    denom = s * s + ridge
    keep = denom > 0
    rhs = grid.coeffs.reshape(-1)
    proj = vh[keep].conj() @ rhs
    c = vh[keep].T @ (proj / denom[keep])
    out = {"coeffs": c, "ridge": float(ridge), "rank": int(np.count_nonzero(s > s[0] * 1e-15))}
    grid._synthesis[key] = out
    return out


def synthesize(grid, spec, metric=ISOTROPIC, eval_points=None, mode="least_squares",
               ridge=None, ng=None):
    """Reconstruct values at ``eval_points`` (default: the analysis samples).

    ``ridge`` defaults to 1e-10 * ||W^(1/2) B||_F.  Literal mode uses ``ng``,
    falling back to ``grid.ng``.
    """
    if eval_points is None:
        if grid.sample_points is None:
            raise ShapeError("no eval_points given and the grid has no sample points")
        eval_points = grid.sample_points
    pts = as_points(eval_points)
    if pts.shape[1] != grid.centers.shape[1]:
        raise ShapeError("eval points and centers differ in dimension")
    if not np.any(grid.coeffs):
        return np.zeros(pts.shape[0]) if grid.real_values and not spec.is_complex \
            else np.zeros(pts.shape[0], dtype=complex)
    if mode == "least_squares":
        c = _synthesis_coefficients(grid, spec, metric, ridge)["coeffs"]
        B = np.conj(_basis(spec, metric, pts, grid.centers, grid.scales))
        vals = np.sum(B * c[None, :], axis=1)
    elif mode == "literal":
        ng = grid.ng if ng is None else ng
        if ng is None:
            raise DomainError("literal synthesis needs N_g (supply ng= or call calibrate_ng)")
        if not (math.isfinite(ng) and ng != 0):
            raise DomainError("N_g must be finite and nonzero")
        P = _basis(spec, metric, pts, grid.centers, grid.scales)
        vals = np.sum(P * grid.coeffs.reshape(-1)[None, :], axis=1) / ng
    else:
        raise DomainError(f"unknown synthesis mode {mode!r}")
    if grid.real_values and not spec.is_complex:
        return vals.real
    return vals


def calibrate_ng(grid, spec, samples, metric=ISOTROPIC):
    """Choose N_g so the literal reconstruction has the same mean as the
    samples; stores it on the grid and returns it."""
    raw = synthesize(grid, spec, metric, samples.points, mode="literal", ng=1.0)
    target = np.mean(samples.values)
    if target == 0:
        raise DomainError("mean of the samples is zero; N_g cannot be matched to it")
    ng = complex(np.mean(raw) / target)
    ng = ng.real if abs(ng.imag) <= 1e-12 * abs(ng) else ng
    if isinstance(ng, complex):
        raise DomainError("calibrated N_g is not real")
    grid.ng = float(ng)
    return grid.ng


def frac_deriv_1d(values, step, m, x=None):
    """Order-m derivative of periodic samples on a uniform grid.

    Mode omega is multiplied by (i omega)^m = |omega|^m e^{i m (pi/2) sign(omega)}.
    The zero mode is kept for m = 0, zeroed otherwise (0^m, and fractional
    integration for m < 0).  For an even sample count the Nyquist mode gets
    the average of the +/- branches, |omega|^m cos(m pi / 2), so real input
    stays real.  Passing ``x`` checks that the grid is uniform.
    """
    f = np.asarray(values, dtype=np.float64)
    if f.ndim != 1 or f.size < 4:
        raise ShapeError("need a 1-D array of at least 4 samples")
    step = float(step)
    if not (math.isfinite(step) and step > 0):
        raise DomainError("step must be > 0")
    if x is not None:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != f.shape:
            raise ShapeError("x and values differ in length")
        if not np.allclose(np.diff(x), step, rtol=1e-9, atol=0):
            raise DomainError("grid is not uniform with the given step")
    m = float(m)
    if m == 0:
        return f.copy()
    n = f.size
    spec = np.fft.rfft(f)
    omega = 2 * math.pi * np.fft.rfftfreq(n, d=step)
    mult = np.zeros(omega.size, dtype=complex)
    nz = omega > 0
    mult[nz] = omega[nz] ** m * complex(math.cos(m * math.pi / 2), math.sin(m * math.pi / 2))
    if n % 2 == 0:
        mult[-1] = omega[-1] ** m * math.cos(m * math.pi / 2)
    return np.fft.irfft(spec * mult, n=n)
