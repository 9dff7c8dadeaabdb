"""Translate-and-scale series built from centers, fitted by truncated-SVD
least squares.

Column order (``column_labels`` returns the same enumeration):

PolyDFW
    the constant column once, then for each center k the monomials
    (x - x_k)^i (y - y_k)^j, 0 <= i <= N_x, 0 <= j <= N_y, (i, j) != (0, 0),
    in graded order: total degree ascending, x-power descending within a
    degree.  One center at the origin with N_x = N_y = 1 gives [1, x, y, xy].
TrigDFW
    for each k, i = 1..N_x, j = 0..N_y: sin(2 pi i (x - x_k)) cos(2 pi j (y - y_k)).
    The i = 0 columns vanish identically and are not emitted.
ConvDiffPolyDFW, variant "exponential"
    the PolyDFW columns times exp(-v . (x - x_k) / 2D).  The constant column
    uses the first center; with v = 0 the matrix equals PolyDFW bit for bit.
ConvDiffPolyDFW, variant "general"
    for each k the columns u#(tau, x - x_k) (x - x_k)^i (y - y_k)^j with
    (0, 0) included per center and u# the drifted modified-Helmholtz general
    solution of dimensionality n.
PolarDFW
    the constant column, then for each k, j = 1..N:
    r_k^j sin(j dtheta_k), r_k^j cos(j dtheta_k), with r_k = |x - x_k| and
    dtheta_k the signed angle from (x_k, y_k) to (x, y).
MQ
    sqrt(|x - x_k|^2 + s_k^2) for each k, any dimension.
WinklerSeries
    all monomials of total degree <= 3 (graded, x-power descending), then for
    each kappa_j and each k the pair (t^-nu ber_nu(t), t^-nu bei_nu(t)) with
    t = sqrt(kappa_j) |x - x_k| and nu = n/2 - 1.  ``monomials=False`` drops
    the polynomial block.
KernelSeries
    one column per center: the real kernel ``kernel`` at x - x_k (the
    boundary-collocation models of ``dfw.pdesolve``).  With ``anchor`` set,
    every column is multiplied by exp(-v . (x - anchor) / 2D).
"""

import dataclasses
import itertools
import math

import numpy as np

from . import kernels
from .errors import DomainError, ShapeError
from .kernels import Family, as_points

FAMILIES = ("PolyDFW", "TrigDFW", "ConvDiffPolyDFW", "PolarDFW", "MQ", "WinklerSeries",
            "KernelSeries")
RANK_TOL = 1e-10


def graded_exponents(nx, ny, include_zero=True):
    """(i, j) pairs with i <= nx, j <= ny by total degree, x-power descending."""
    out = []
    for d in range(nx + ny + 1):
        for i in range(min(d, nx), max(0, d - ny) - 1, -1):
            if d == 0 and not include_zero:
                continue
            out.append((i, d - i))
    return out


def monomial_exponents(dim, max_degree):
    """Exponent tuples in ``dim`` variables with total degree <= max_degree,
    graded, lexicographically descending within a degree."""
    out = []
    for d in range(max_degree + 1):
        level = [e for e in itertools.product(range(d, -1, -1), repeat=dim) if sum(e) == d]
        out.extend(sorted(level, reverse=True))
    return out


def _nonneg_int(name, v):
    if v is None or int(v) != v or v < 0:
        raise DomainError(f"{name} must be a non-negative integer")
    return int(v)


@dataclasses.dataclass(frozen=True)
class BasisSpec:
    """Series family plus its parameters.

    Fields used per family: ``nx``/``ny`` (Poly, Trig, ConvDiffPoly), ``degree``
    (Polar N), ``shapes`` (MQ s_k), ``velocity``/``diffusivity``/``variant``
    (ConvDiffPoly; the general variant also needs ``n`` and ``tau``),
    ``n`` and ``stiffness`` (Winkler, kappa_j values).
    """

    family: str
    centers: tuple
    nx: int | None = None
    ny: int | None = None
    degree: int | None = None
    shapes: tuple | None = None
    velocity: tuple | None = None
    diffusivity: float | None = None
    variant: str = "exponential"
    n: float | None = None
    tau: float | None = None
    stiffness: tuple | None = None
    monomials: bool = True
    kernel: kernels.KernelSpec | None = None
    anchor: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown basis family {self.family!r}")
        c = as_points(self.centers)
        if c.shape[0] < 1:
            raise DomainError("need at least one center")
        object.__setattr__(self, "centers", tuple(tuple(float(v) for v in row) for row in c))
        fam = self.family
        if fam in ("PolyDFW", "TrigDFW", "ConvDiffPolyDFW"):
            object.__setattr__(self, "nx", _nonneg_int("nx", self.nx))
            object.__setattr__(self, "ny", _nonneg_int("ny", self.ny))
        if fam in ("PolyDFW", "TrigDFW", "ConvDiffPolyDFW", "PolarDFW") and self.dim != 2:
            raise ShapeError(f"{fam} is defined for 2-D points only")
        if fam == "PolarDFW":
            object.__setattr__(self, "degree", _nonneg_int("degree", self.degree))
            if np.any(np.all(c == 0, axis=1)):
                raise DomainError("PolarDFW centers must not be at the origin (angle undefined)")
        if fam == "MQ":
            s = (0.0,) * c.shape[0] if self.shapes is None else tuple(float(v) for v in self.shapes)
            if len(s) == 1 and c.shape[0] > 1:
                s = s * c.shape[0]
            if len(s) != c.shape[0] or any(not math.isfinite(v) or v < 0 for v in s):
                raise DomainError("MQ needs one finite shape s_k >= 0 per center")
            object.__setattr__(self, "shapes", s)
        if fam == "ConvDiffPolyDFW":
            if self.velocity is None or self.diffusivity is None:
                raise DomainError("ConvDiffPolyDFW needs velocity and diffusivity")
            v = tuple(float(a) for a in self.velocity)
            if len(v) != 2:
                raise ShapeError("velocity must have 2 components")
            object.__setattr__(self, "velocity", v)
            if not self.diffusivity > 0:
                raise DomainError("diffusivity must be > 0")
            object.__setattr__(self, "diffusivity", float(self.diffusivity))
            if self.variant not in ("exponential", "general"):
                raise DomainError("variant must be 'exponential' or 'general'")
            if self.variant == "general":
                if self.n is None or self.tau is None:
                    raise DomainError("the general variant needs n and tau")
                kernels.KernelSpec(Family.CONVDIFF_GEN, self.n, self.tau,
                                   kernels.Drift(v, self.diffusivity))
        if fam == "WinklerSeries":
            if self.n is None or not 2 <= self.n <= 5:
                raise DomainError("WinklerSeries needs 2 <= n <= 5")
            if not self.stiffness:
                raise DomainError("WinklerSeries needs at least one stiffness kappa_j")
            k = tuple(float(v) for v in self.stiffness)
            if any(not math.isfinite(v) or v <= 0 for v in k):
                raise DomainError("stiffness values must be finite and > 0")
            object.__setattr__(self, "stiffness", k)
        if fam == "KernelSeries":
            if not isinstance(self.kernel, kernels.KernelSpec):
                raise DomainError("KernelSeries needs a KernelSpec")
            if self.kernel.is_complex:
                raise DomainError("KernelSeries needs a real kernel family")
            if self.anchor is not None:
                a = tuple(float(v) for v in self.anchor)
                if len(a) != self.dim:
                    raise ShapeError("anchor dimension does not match the centers")
                object.__setattr__(self, "anchor", a)
                if self.velocity is None or self.diffusivity is None or not self.diffusivity > 0:
                    raise DomainError("an anchored KernelSeries needs velocity and diffusivity > 0")
                object.__setattr__(self, "velocity", tuple(float(v) for v in self.velocity))
                if len(self.velocity) != self.dim:
                    raise ShapeError("velocity dimension does not match the centers")

    @property
    def dim(self):
        return len(self.centers[0])

    @property
    def center_array(self):
        return np.asarray(self.centers, dtype=np.float64)

    def with_centers(self, centers, shapes=None):
        kw = {"centers": centers}
        if self.family == "MQ":
            kw["shapes"] = self.shapes if shapes is None else shapes
        return dataclasses.replace(self, **kw)

    def to_dict(self):
        d = {"family": self.family, "centers": [list(c) for c in self.centers]}
        for name in ("nx", "ny", "degree", "diffusivity", "n", "tau"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        for name in ("shapes", "velocity", "stiffness", "anchor"):
            v = getattr(self, name)
            if v is not None:
                d[name] = list(v)
        if self.family == "ConvDiffPolyDFW":
            d["variant"] = self.variant
        if self.family == "WinklerSeries":
            d["monomials"] = self.monomials
        if self.kernel is not None:
            d["kernel"] = self.kernel.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        kw = dict(d)
        for name in ("shapes", "velocity", "stiffness", "anchor"):
            if kw.get(name) is not None:
                kw[name] = tuple(kw[name])
        if kw.get("kernel") is not None:
            kw["kernel"] = kernels.KernelSpec.from_dict(kw["kernel"])
        kw["centers"] = tuple(tuple(c) for c in kw["centers"])
        return cls(**kw)


# -- column construction ---------------------------------------------------

def _poly_blocks(basis, X, factor=None):
    """Columns shared by PolyDFW and the exponential ConvDiff variant."""
    C = basis.center_array
    exps = graded_exponents(basis.nx, basis.ny, include_zero=False)
    first = np.ones(X.shape[0]) if factor is None else factor(0)
    cols = [first]
    for k in range(C.shape[0]):
        dx = X[:, 0] - C[k, 0]
        dy = X[:, 1] - C[k, 1]
        f = None if factor is None else factor(k)
        for i, j in exps:
            m = dx ** i * dy ** j
            cols.append(m if f is None else f * m)
    return cols


def _exp_factor(basis, X):
    C = basis.center_array
    vx, vy = basis.velocity
    D = basis.diffusivity

    def factor(k):
        return np.exp((-vx * (X[:, 0] - C[k, 0]) - vy * (X[:, 1] - C[k, 1])) / (2 * D))
    return factor


def _polar_angle(X, C):
    """Signed angle from each center vector to each point vector, (P, M)."""
    cross = C[None, :, 0] * X[:, None, 1] - C[None, :, 1] * X[:, None, 0]
    dot = C[None, :, 0] * X[:, None, 0] + C[None, :, 1] * X[:, None, 1]
    return np.arctan2(cross, dot)


def _columns(basis, X):
    fam = basis.family
    C = basis.center_array
    if fam == "PolyDFW":
        return _poly_blocks(basis, X)
    if fam == "ConvDiffPolyDFW" and basis.variant == "exponential":
        return _poly_blocks(basis, X, _exp_factor(basis, X))
    if fam == "ConvDiffPolyDFW":
        spec = kernels.KernelSpec(Family.CONVDIFF_GEN, basis.n, basis.tau,
                                  kernels.Drift(basis.velocity, basis.diffusivity))
        G = spec.matrix(X, C)
        exps = graded_exponents(basis.nx, basis.ny, include_zero=True)
        cols = []
        for k in range(C.shape[0]):
            dx = X[:, 0] - C[k, 0]
            dy = X[:, 1] - C[k, 1]
            for i, j in exps:
                cols.append(G[:, k] * (dx ** i * dy ** j))
        return cols
    if fam == "TrigDFW":
        cols = []
        for k in range(C.shape[0]):
            dx = X[:, 0] - C[k, 0]
            dy = X[:, 1] - C[k, 1]
            for i in range(1, basis.nx + 1):
                s = np.sin(2 * math.pi * i * dx)
                for j in range(basis.ny + 1):
                    cols.append(s * np.cos(2 * math.pi * j * dy))
        return cols
    if fam == "PolarDFW":
        if np.any(np.all(X == 0, axis=1)):
            raise DomainError("PolarDFW cannot be evaluated at the origin (angle undefined)")
        R = kernels.pairwise_distance(kernels.ISOTROPIC, X, C)
        T = _polar_angle(X, C)
        cols = [np.ones(X.shape[0])]
        for k in range(C.shape[0]):
            for j in range(1, basis.degree + 1):
                rj = R[:, k] ** j
                cols.append(rj * np.sin(j * T[:, k]))
                cols.append(rj * np.cos(j * T[:, k]))
        return cols
    if fam == "MQ":
        R = kernels.pairwise_distance(kernels.ISOTROPIC, X, C)
        s = np.asarray(basis.shapes)
        return list(np.sqrt(R * R + s[None, :] ** 2).T)
    if fam == "KernelSeries":
        K = basis.kernel.matrix(X, C)
        if basis.anchor is not None:
            K = K * kernels.drift_factor(basis.velocity, basis.diffusivity,
                                         X - np.asarray(basis.anchor))[:, None]
        return list(K.T)
    if fam == "WinklerSeries":
        cols = []
        for e in (monomial_exponents(X.shape[1], 3) if basis.monomials else []):
            m = np.ones(X.shape[0])
            for axis, p in enumerate(e):
                if p:
                    m = m * X[:, axis] ** p
            cols.append(m)
        R = kernels.pairwise_distance(kernels.ISOTROPIC, X, C)
        for kappa in basis.stiffness:
            W = kernels.radial(Family.WINKLER_GEN, basis.n, math.sqrt(kappa), R)
            for k in range(C.shape[0]):
                cols.append(W[:, k].real)
                cols.append(W[:, k].imag)
        return cols
    raise DomainError(f"unknown basis family {fam!r}")


def column_labels(basis):
    """Human-readable names aligned with the design-matrix columns."""
    fam = basis.family
    M = len(basis.centers)
    if fam in ("PolyDFW",) or (fam == "ConvDiffPolyDFW" and basis.variant == "exponential"):
        return ["const"] + [f"k{k}:x^{i}y^{j}" for k in range(M)
                            for i, j in graded_exponents(basis.nx, basis.ny, False)]
    if fam == "ConvDiffPolyDFW":
        return [f"k{k}:u#x^{i}y^{j}" for k in range(M)
                for i, j in graded_exponents(basis.nx, basis.ny, True)]
    if fam == "TrigDFW":
        return [f"k{k}:sin{i}cos{j}" for k in range(M)
                for i in range(1, basis.nx + 1) for j in range(basis.ny + 1)]
    if fam == "PolarDFW":
        return ["const"] + [f"k{k}:r^{j}{t}" for k in range(M)
                            for j in range(1, basis.degree + 1) for t in ("sin", "cos")]
    if fam == "MQ":
        return [f"k{k}:mq" for k in range(M)]
    if fam == "KernelSeries":
        return [f"k{k}:{basis.kernel.family.value}" for k in range(M)]
    labels = ["mono" + "".join(map(str, e)) for e in monomial_exponents(basis.dim, 3)] \
        if basis.monomials else []
    for j, _ in enumerate(basis.stiffness):
        for k in range(M):
            labels += [f"kappa{j}:k{k}:ber", f"kappa{j}:k{k}:bei"]
    return labels


def build_design_matrix(basis, points):
    """Rows are points, columns follow the module-level enumeration."""
    X = as_points(points)
    if X.shape[1] != basis.dim:
        raise ShapeError(f"points have dimension {X.shape[1]}, basis expects {basis.dim}")
    return np.column_stack(_columns(basis, X))


# -- solving ----------------------------------------------------------------

def lstsq_minnorm(A, b, rank_tol=RANK_TOL):
    """Minimum-norm least-squares solution with singular values below
    rank_tol * sigma_max discarded.  Returns (coeffs, rank, residual_norm)."""
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if A.ndim != 2 or A.size == 0:
        raise ShapeError("matrix is empty")
    if A.shape[0] != b.size:
        raise ShapeError(f"matrix has {A.shape[0]} rows, rhs has {b.size}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise DomainError("matrix and rhs must be finite")
    if not rank_tol >= 0:
        raise DomainError("rank_tol must be >= 0")
    u, s, vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        x = np.zeros(A.shape[1])
        return x, 0, float(np.linalg.norm(b))
    keep = s > rank_tol * s[0]
    rank = int(np.count_nonzero(keep))
    x = vt[:rank].T @ ((u[:, :rank].T @ b) / s[:rank])
    res = float(np.linalg.norm(A @ x - b))
    return x, rank, res


@dataclasses.dataclass(frozen=True)
class SeriesModel:
    basis: BasisSpec
    coeffs: np.ndarray
    rank: int
    residual_norm: float
    rank_tol: float
    max_residual: float | None = None
    extra: dict = dataclasses.field(default_factory=dict, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "coeffs", c)
        if self.rank > c.size:
            raise ShapeError("rank exceeds coefficient count")

    def __eq__(self, other):
        return (isinstance(other, SeriesModel) and self.basis == other.basis
                and np.array_equal(self.coeffs, other.coeffs) and self.rank == other.rank
                and self.residual_norm == other.residual_norm and self.rank_tol == other.rank_tol
                and self.max_residual == other.max_residual and self.extra == other.extra)

    __hash__ = None

    def diagnostics(self):
        d = {"rank": self.rank, "residual_norm": self.residual_norm, "rank_tol": self.rank_tol,
             "n_coeffs": int(self.coeffs.size)}
        if self.max_residual is not None:
            d["max_residual"] = self.max_residual
        return d

    def predict(self, points):
        return predict(self, points)

    def to_dict(self):
        d = {"basis": self.basis.to_dict(), "coeffs": self.coeffs.tolist(), "rank": self.rank,
             "residual_norm": self.residual_norm, "rank_tol": self.rank_tol,
             "max_residual": self.max_residual}
        if self.extra:
            d["extra"] = self.extra
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(BasisSpec.from_dict(d["basis"]), np.asarray(d["coeffs"], dtype=np.float64),
                   int(d["rank"]), float(d["residual_norm"]), float(d["rank_tol"]),
                   d.get("max_residual"), dict(d.get("extra", {})))


def _fsum_rows(A, c):
    return np.array([math.fsum(row) for row in A * c[None, :]])


def fit_series(basis, samples, rank_tol=RANK_TOL):
    """Least-squares fit of real sample values."""
    if np.iscomplexobj(samples.values):
        raise DomainError("series fitting needs real sample values")
    A = build_design_matrix(basis, samples.points)
    c, rank, res = lstsq_minnorm(A, samples.values, rank_tol)
    r = _fsum_rows(A, c) - samples.values
    return SeriesModel(basis, c, rank, res, float(rank_tol), float(np.max(np.abs(r))))


def predict(model, points):
    """Model values at many points.  Each value is an exactly rounded sum, so
    the result does not depend on the order of the columns."""
    A = build_design_matrix(model.basis, points)
    if A.shape[1] != model.coeffs.size:
        raise ShapeError("coefficient count does not match the basis")
    return _fsum_rows(A, model.coeffs)


def eval_series(model, point):
    """Model value at a single point."""
    p = np.asarray(point, dtype=np.float64).reshape(1, -1)
    return float(predict(model, p)[0])


def threshold_coefficients(model, samples, threshold):
    """Zero coefficients with |c| < threshold * max|c|.

    Returns (thresholded model, report) where the report lists the number of
    dropped terms and the sample residual norm before and after.
    """
    if not threshold >= 0:
        raise DomainError("threshold must be >= 0")
    c = model.coeffs.copy()
    cut = threshold * (np.max(np.abs(c)) if c.size else 0.0)
    drop = np.abs(c) < cut
    c[drop] = 0.0
    A = build_design_matrix(model.basis, samples.points)
    before = float(np.linalg.norm(_fsum_rows(A, model.coeffs) - samples.values))
    after = float(np.linalg.norm(_fsum_rows(A, c) - samples.values))
    new = dataclasses.replace(model, coeffs=c, residual_norm=after,
                              max_residual=float(np.max(np.abs(_fsum_rows(A, c) - samples.values))))
    return new, {"dropped": int(np.count_nonzero(drop)), "kept": int(c.size - np.count_nonzero(drop)),
                 "residual_before": before, "residual_after": after,
                 "residual_change": after - before}
