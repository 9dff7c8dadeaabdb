"""Boundary-knot collocation for the modified Helmholtz, steady
convection-diffusion-reaction and Winkler plate equations.

Centers are the boundary points themselves; every expansion uses a kernel
that is regular at its own center, so no fictitious boundary is needed.

Operators (residual conventions used by ``pde_residual``):

* ModifiedHelmholtz:   lap w - tau^2 w
* ConvectionDiffusion: D lap u + v . grad u - k u,  tau^2 = (|v|/2D)^2 + k/D
* WinklerPlate:        lap^2 u + kappa^2 u

The substitution u = exp(-v . x / 2D) w maps the second onto the first.
Winkler problems take two conditions per boundary point, u and lap u; the
Laplacian of each expansion column is known in closed form
(lap Ber = -kappa Bei, lap Bei = kappa Ber when n equals the point dimension).
"""

import dataclasses
import math

import numpy as np

from . import approx, kernels
from .approx import BasisSpec, SeriesModel, lstsq_minnorm
from .errors import DomainError, RankError, ShapeError
from .kernels import Family, as_points

OPERATORS = ("ModifiedHelmholtz", "ConvectionDiffusion", "WinklerPlate")
# Collocation matrices of smooth kernels have singular values that decay to
# rounding level.  Cutting at 1e-10 (the fitting default) throws away modes
# the boundary data still resolves; a cutoff proportional to the matrix size
# moves with the knot count and breaks convergence under refinement.
RANK_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class PdeSpec:
    operator: str
    n: float = 2.0
    tau: float | None = None
    velocity: tuple | None = None
    diffusivity: float | None = None
    reaction: float | None = None
    kappa: float | None = None

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise DomainError(f"unknown operator {self.operator!r}")
        if self.operator == "ModifiedHelmholtz":
            if self.tau is None or not self.tau > 0:
                raise DomainError("ModifiedHelmholtz needs tau > 0")
        elif self.operator == "ConvectionDiffusion":
            if self.velocity is None or self.diffusivity is None or self.reaction is None:
                raise DomainError("ConvectionDiffusion needs velocity, diffusivity and reaction")
            object.__setattr__(self, "velocity", tuple(float(c) for c in self.velocity))
            kernels.tau_from_drift(self.velocity, self.diffusivity, self.reaction)
        else:
            if self.kappa is None or not self.kappa > 0:
                raise DomainError("WinklerPlate needs kappa > 0")
            if not 2 <= self.n <= 5:
                raise DomainError("WinklerPlate needs 2 <= n <= 5")

    @property
    def effective_tau(self):
        if self.operator == "ModifiedHelmholtz":
            return float(self.tau)
        if self.operator == "ConvectionDiffusion":
            return kernels.tau_from_drift(self.velocity, self.diffusivity, self.reaction)
        raise DomainError("WinklerPlate has no tau")

    def to_dict(self):
        d = {"operator": self.operator, "n": self.n}
        for name in ("tau", "diffusivity", "reaction", "kappa"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        if self.velocity is not None:
            d["velocity"] = list(self.velocity)
        return d

    @classmethod
    def from_dict(cls, d):
        kw = dict(d)
        if kw.get("velocity") is not None:
            kw["velocity"] = tuple(kw["velocity"])
        return cls(**kw)


@dataclasses.dataclass(frozen=True)
class BoundaryProblem:
    """Dirichlet data on boundary points; ``boundary_laplacian`` carries the
    second condition for plate problems."""

    boundary_points: np.ndarray
    boundary_values: np.ndarray
    interior_probe_points: np.ndarray | None = None
    boundary_laplacian: np.ndarray | None = None

    def __post_init__(self):
        pts = as_points(self.boundary_points)
        vals = np.asarray(self.boundary_values, dtype=np.float64).reshape(-1)
        if pts.shape[0] < 1 or vals.size != pts.shape[0]:
            raise ShapeError("need one boundary value per boundary point (at least one)")
        if not np.all(np.isfinite(vals)):
            raise DomainError("boundary values must be finite")
        object.__setattr__(self, "boundary_points", pts)
        object.__setattr__(self, "boundary_values", vals)
        if self.interior_probe_points is not None:
            probes = as_points(self.interior_probe_points)
            if probes.shape[1] != pts.shape[1]:
                raise ShapeError("probe points and boundary points differ in dimension")
            object.__setattr__(self, "interior_probe_points", probes)
        if self.boundary_laplacian is not None:
            lap = np.asarray(self.boundary_laplacian, dtype=np.float64).reshape(-1)
            if lap.size != pts.shape[0] or not np.all(np.isfinite(lap)):
                raise ShapeError("need one finite boundary Laplacian value per boundary point")
            object.__setattr__(self, "boundary_laplacian", lap)

    @property
    def dim(self):
        return self.boundary_points.shape[1]

    def diameter(self):
        return domain_diameter(self.boundary_points)

    def to_dict(self):
        d = {"boundary_points": self.boundary_points.tolist(),
             "boundary_values": self.boundary_values.tolist()}
        if self.interior_probe_points is not None:
            d["interior_probe_points"] = self.interior_probe_points.tolist()
        if self.boundary_laplacian is not None:
            d["boundary_laplacian"] = self.boundary_laplacian.tolist()
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["boundary_points"], dtype=np.float64),
                   np.asarray(d["boundary_values"], dtype=np.float64),
                   None if d.get("interior_probe_points") is None
                   else np.asarray(d["interior_probe_points"], dtype=np.float64),
                   None if d.get("boundary_laplacian") is None
                   else np.asarray(d["boundary_laplacian"], dtype=np.float64))


def domain_diameter(points):
    P = as_points(points)
    if P.shape[0] < 2:
        return 0.0
    return float(np.max(kernels.pairwise_distance(kernels.ISOTROPIC, P, P)))


def _check_distinct(points):
    P = as_points(points)
    R = kernels.pairwise_distance(kernels.ISOTROPIC, P, P)
    np.fill_diagonal(R, np.inf)
    if np.any(R == 0):
        raise DomainError("boundary points must be pairwise distinct")


def _collocate(basis, A, b, rank_tol, extra):
    c, rank, res = lstsq_minnorm(A, b, rank_tol)
    if rank == 0 and np.any(b):
        raise RankError("collocation matrix has numerical rank zero")
    r = approx._fsum_rows(A, c) - b
    extra = dict(extra)
    extra["boundary_residual_max"] = float(np.max(np.abs(r)))
    return SeriesModel(basis, c, rank, res, float(rank_tol), float(np.max(np.abs(r))), extra)


def _helmholtz_basis(points, tau, n, velocity=None, diffusivity=1.0, anchor=None, direct=False):
    dim = points.shape[1]
    zero = (0.0,) * dim
    if direct:
        drift = kernels.Drift(velocity, diffusivity)
    else:
        drift = kernels.Drift(zero, 1.0)
    kern = kernels.KernelSpec(Family.CONVDIFF_GEN, n, tau, drift)
    return BasisSpec("KernelSeries", tuple(map(tuple, points)), kernel=kern, anchor=anchor,
                     velocity=None if anchor is None else tuple(velocity),
                     diffusivity=None if anchor is None else diffusivity)


def solve_modified_helmholtz(problem, tau, n=2.0, rank_tol=RANK_TOL):
    """Expand w in the regular modified-Helmholtz kernel centered at each
    boundary point and collocate the Dirichlet data."""
    _check_distinct(problem.boundary_points)
    basis = _helmholtz_basis(problem.boundary_points, tau, n)
    A = approx.build_design_matrix(basis, problem.boundary_points)
    return _collocate(basis, A, problem.boundary_values, rank_tol,
                      {"operator": "ModifiedHelmholtz", "tau": float(tau)})


def solve_convdiff(problem, velocity, diffusivity, k, n=2.0, method="direct", rank_tol=RANK_TOL):
    """Steady convection-diffusion-reaction with Dirichlet data.

    ``method="direct"`` expands u in the drifted kernels
    exp(-v.(x - x_l)/2D) G(tau |x - x_l|).  ``method="transform"`` maps the
    data to w = exp(v.x/2D) u, solves the modified Helmholtz problem and
    returns the model exp(-v.x/2D) w(x).  The two span the same space.
    """
    _check_distinct(problem.boundary_points)
    v = tuple(float(c) for c in velocity)
    if len(v) != problem.dim:
        raise ShapeError("velocity dimension does not match the boundary points")
    tau = kernels.tau_from_drift(v, diffusivity, k)
    extra = {"operator": "ConvectionDiffusion", "tau": tau, "method": method}
    P = problem.boundary_points
    if method == "direct":
        basis = _helmholtz_basis(P, tau, n, v, diffusivity, direct=True)
        A = approx.build_design_matrix(basis, P)
        return _collocate(basis, A, problem.boundary_values, rank_tol, extra)
    if method == "transform":
        origin = (0.0,) * problem.dim
        w_vals = problem.boundary_values / kernels.drift_factor(v, diffusivity, P)
        w_basis = _helmholtz_basis(P, tau, n)
        A = approx.build_design_matrix(w_basis, P)
        w_model = _collocate(w_basis, A, w_vals, rank_tol, extra)
        u_basis = dataclasses.replace(w_basis, anchor=origin, velocity=v,
                                      diffusivity=float(diffusivity))
        Au = approx.build_design_matrix(u_basis, P)
        r = approx._fsum_rows(Au, w_model.coeffs) - problem.boundary_values
        ex = dict(w_model.extra)
        ex["boundary_residual_max"] = float(np.max(np.abs(r)))
        return dataclasses.replace(w_model, basis=u_basis, max_residual=float(np.max(np.abs(r))),
                                   residual_norm=float(np.linalg.norm(r)), extra=ex)
    raise DomainError(f"unknown method {method!r}")


def to_convdiff_model(w_model, velocity, diffusivity):
    """The u-field exp(-v.x/2D) w(x) of a modified-Helmholtz model."""
    b = w_model.basis
    if b.family != "KernelSeries" or b.anchor is not None:
        raise DomainError("expected an unanchored KernelSeries model")
    origin = (0.0,) * b.dim
    nb = dataclasses.replace(b, anchor=origin, velocity=tuple(velocity),
                             diffusivity=float(diffusivity))
    return dataclasses.replace(w_model, basis=nb)


def _monomial_laplacian(X, e):
    """Laplacian of prod_i x_i^e_i at the rows of X."""
    out = np.zeros(X.shape[0])
    for axis, p in enumerate(e):
        if p < 2:
            continue
        term = np.full(X.shape[0], float(p * (p - 1)))
        for a2, q in enumerate(e):
            power = q - 2 if a2 == axis else q
            if power:
                term = term * X[:, a2] ** power
        out += term
    return out


def winkler_laplacian_matrix(basis, points):
    """Closed-form Laplacian of every WinklerSeries column (n = point dimension)."""
    X = as_points(points)
    if basis.n != X.shape[1]:
        raise DomainError("closed-form Laplacian needs n equal to the point dimension")
    A = approx.build_design_matrix(basis, X)
    L = np.empty_like(A)
    col = 0
    if basis.monomials:
        for e in approx.monomial_exponents(X.shape[1], 3):
            L[:, col] = _monomial_laplacian(X, e)
            col += 1
    M = len(basis.centers)
    for kappa in basis.stiffness:
        for _ in range(M):
            L[:, col] = -kappa * A[:, col + 1]
            L[:, col + 1] = kappa * A[:, col]
            col += 2
    return L


def solve_winkler_plate(problem, kappa, n=None, include_monomials=False, rank_tol=RANK_TOL):
    """Collocate u and lap u with ber/bei columns of stiffness kappa centered at
    the boundary points.

    ``include_monomials=True`` adds the cubic monomials of the series
    expansion.  They are biharmonic but do not solve the plate equation
    (lap^2 p + kappa^2 p = kappa^2 p), and on smooth test problems they
    raise the interior error from ~1e-11 to ~1e-2, so they are off by default.
    """
    if problem.boundary_laplacian is None:
        raise DomainError("plate problems need boundary_laplacian values")
    _check_distinct(problem.boundary_points)
    n = float(problem.dim if n is None else n)
    basis = BasisSpec("WinklerSeries", tuple(map(tuple, problem.boundary_points)), n=n,
                      stiffness=(float(kappa),), monomials=include_monomials)
    P = problem.boundary_points
    A = np.vstack([approx.build_design_matrix(basis, P), winkler_laplacian_matrix(basis, P)])
    b = np.concatenate([problem.boundary_values, problem.boundary_laplacian])
    return _collocate(basis, A, b, rank_tol, {"operator": "WinklerPlate", "kappa": float(kappa)})


# -- finite-difference residual checker --------------------------------------

# Boundary-knot coefficients are large (1e5-1e7), so the rounding noise of a
# second difference grows like eps * sum|c_i a_i| / h^2.  These factors
# balance that against the O(h^2) truncation error.
H_FACTOR = 5e-3
H_FACTOR_BIHARMONIC = 5e-3


def default_step(model, spec):
    diam = domain_diameter(model.basis.center_array) or 1.0
    f = H_FACTOR_BIHARMONIC if spec.operator == "WinklerPlate" else H_FACTOR
    return f * diam


def _fd_laplacian(f, p, h):
    dim = p.size
    c = f(p[None, :])[0]
    pts = []
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = h
        pts += [p + e, p - e]
    vals = f(np.array(pts))
    return (math.fsum(vals) - 2 * dim * c) / (h * h), c, vals


def pde_residual(model, spec, point, h=None):
    """|L u| at ``point`` by central differences of the model's own values.

    Second-order operators use the (2d+1)-point Laplacian and central first
    differences; the plate operator applies the Laplacian stencil twice
    (13 points in 2-D).  ``h`` defaults to 5e-3 times the center-set
    diameter.
    """
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    if h is None:
        h = default_step(model, spec)
    if not h > 0:
        raise DomainError("stencil width must be > 0")
    f = model.predict
    if spec.operator == "WinklerPlate":
        dim = p.size
        lap_c, c, _ = _fd_laplacian(f, p, h)
        laps = []
        for j in range(dim):
            e = np.zeros(dim)
            e[j] = h
            laps += [_fd_laplacian(f, p + e, h)[0], _fd_laplacian(f, p - e, h)[0]]
        bilap = (math.fsum(laps) - 2 * dim * lap_c) / (h * h)
        return abs(bilap + spec.kappa ** 2 * c)
    lap, c, vals = _fd_laplacian(f, p, h)
    if spec.operator == "ModifiedHelmholtz":
        return abs(lap - spec.tau ** 2 * c)
    grad = (vals[0::2] - vals[1::2]) / (2 * h)
    v = np.asarray(spec.velocity)
    if v.size != p.size:
        raise ShapeError("velocity dimension does not match the point")
    adv = math.fsum(v * grad)
    return abs(spec.diffusivity * lap + adv - spec.reaction * c)


def residuals(model, spec, points, h=None):
    return np.array([pde_residual(model, spec, p, h) for p in as_points(points)])
