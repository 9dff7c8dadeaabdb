"""Distance-function kernel families and distance metrics.

Every kernel is a function of a distance r (and, for the drift family, of the
displacement vector).  Prefactors are taken exactly as printed in the source
formulas, so the n = 1 branch of the exponential kernels carries 1/(2 pi) while
the HF-J kernel carries 1/2.  ``KernelSpec.norm`` multiplies any family by a
user constant and defaults to 1.

Families and their ``scale`` parameter:

=============  =========================================================  =========
family         value at distance r, nu = n/2 - 1, x = scale * r            scale
=============  =========================================================  =========
EDecay         lam^(n-1/2)/(2 pi) (2 pi x)^-nu K_nu(x)                     lam
EOsc           i lam^(n-1/2)/4 (-2 pi i x)^-nu (J_nu(x) + i Y_nu(x))       lam
HFJ            lam^(n-1/2)/(2 pi) (2 pi x)^-nu J_nu(x)                     lam
WinklerFund    i/(2 pi) x^-nu (ker_nu(x) + i kei_nu(x))                    sqrt(kappa)
WinklerGen     x^-nu (ber_nu(x) + i bei_nu(x))                             sqrt(kappa)
BergerFund     r^(2-n)/((n-2) S_n) + (alpha/(2 pi r))^-nu K_nu(alpha r)    alpha
BergerGen      1 + (alpha/(2 pi r))^-nu I_nu(alpha r)                      alpha
ConvDiffGen    tau^(n-1/2)/(2 pi) e^(-v.d/2D) (2 pi x)^-nu I_nu(x)         tau
=============  =========================================================  =========

with the explicit n = 1 branches lam^(1/2)/(2 pi) e^{-x}, lam^(1/2)/(2 pi)
e^{ix} and lam^(1/2)/2 cos x, and BergerFund at n = 2 equal to
-(ln r + K_0(alpha r))/(2 pi alpha^2).  The principal branch is used for
(-2 pi i x)^-nu.  S_n = 2 pi^(n/2)/Gamma(n/2) is the unit-sphere area.

Scalar distances give floats (real families) or ``ComplexValue``; arrays give
numpy arrays.  Singular families raise ``SingularityError`` at r = 0.
"""

import dataclasses
import enum
import math

import numpy as np

from . import specfun
from .errors import DomainError, ShapeError, SingularityError

# Below this argument the nonsingular kernels use their r -> 0 limit; the
# relative correction is O(x^2) so the switch is invisible in double precision.
_TINY = 1e-100


class Family(str, enum.Enum):
    E_DECAY = "EDecay"
    E_OSC = "EOsc"
    HFJ = "HFJ"
    WINKLER_FUND = "WinklerFund"
    WINKLER_GEN = "WinklerGen"
    BERGER_FUND = "BergerFund"
    BERGER_GEN = "BergerGen"
    CONVDIFF_GEN = "ConvDiffGen"


SINGULAR = frozenset({Family.E_DECAY, Family.E_OSC, Family.WINKLER_FUND, Family.BERGER_FUND})
COMPLEX = frozenset({Family.E_OSC, Family.WINKLER_FUND, Family.WINKLER_GEN})
PLATE = frozenset({Family.WINKLER_FUND, Family.WINKLER_GEN, Family.BERGER_FUND, Family.BERGER_GEN})


def is_singular(family, n):
    """True when the family blows up (or is undefined) at r = 0."""
    family = Family(family)
    if family in (Family.E_DECAY, Family.E_OSC):
        return n != 1
    return family in SINGULAR


@dataclasses.dataclass(frozen=True)
class ComplexValue:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError("ComplexValue components must be finite")

    def __complex__(self):
        return complex(self.re, self.im)

    @classmethod
    def of(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)


@dataclasses.dataclass(frozen=True)
class DistanceMetric:
    """Isotropic Euclidean distance or the per-axis weighted form
    sqrt(sum_j eta_j (x_j - c_j)^2)."""

    mode: str = "isotropic"
    weights: tuple | None = None

    def __post_init__(self):
        if self.mode == "isotropic":
            if self.weights is not None:
                raise DomainError("isotropic metric takes no weights")
        elif self.mode == "anisotropic":
            if self.weights is None or len(self.weights) == 0:
                raise DomainError("anisotropic metric needs weights")
            w = tuple(float(v) for v in self.weights)
            if not all(math.isfinite(v) and v > 0 for v in w):
                raise DomainError("anisotropic weights must be finite and > 0")
            object.__setattr__(self, "weights", w)
        else:
            raise DomainError(f"unknown metric mode {self.mode!r}")

    @classmethod
    def isotropic(cls):
        return cls()

    @classmethod
    def anisotropic(cls, weights):
        return cls("anisotropic", tuple(weights))

    def to_dict(self):
        d = {"mode": self.mode}
        if self.weights is not None:
            d["weights"] = list(self.weights)
        return d

    @classmethod
    def from_dict(cls, d):
        w = d.get("weights")
        return cls(d.get("mode", "isotropic"), None if w is None else tuple(w))

    def _weight_vector(self, dim):
        if self.weights is None:
            return None
        if len(self.weights) != dim:
            raise ShapeError(f"metric has {len(self.weights)} weights, points have dimension {dim}")
        return np.asarray(self.weights)


ISOTROPIC = DistanceMetric()


def as_points(p):
    """Coerce to a (count, dim) float array.  A flat list is read as 1-D points."""
    a = np.asarray(p, dtype=np.float64)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ShapeError("points must be a (count, dim) array")
    if not np.all(np.isfinite(a)):
        raise DomainError("points must be finite")
    return a


def distance(metric, x, c):
    """Distance between two points under ``metric``."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    c = np.atleast_1d(np.asarray(c, dtype=np.float64))
    if x.shape != c.shape or x.ndim != 1:
        raise ShapeError(f"point shapes differ: {x.shape} vs {c.shape}")
    w = metric._weight_vector(x.size)
    d = x - c
    s = d * d if w is None else w * d * d
    return math.sqrt(math.fsum(s))


def pairwise_distance(metric, points, centers):
    """(len(points), len(centers)) matrix of distances.  Rows are independent
    and each is summed over coordinates in a fixed order."""
    X = as_points(points)
    C = as_points(centers)
    if X.shape[1] != C.shape[1]:
        raise ShapeError(f"points have dimension {X.shape[1]}, centers {C.shape[1]}")
    w = metric._weight_vector(X.shape[1])
    acc = np.zeros((X.shape[0], C.shape[0]))
    for j in range(X.shape[1]):
        d = X[:, j][:, None] - C[:, j][None, :]
        acc += d * d if w is None else w[j] * d * d
    return np.sqrt(acc)


def displacements(points, centers):
    """(len(points), len(centers), dim) array of x - c."""
    X = as_points(points)
    C = as_points(centers)
    if X.shape[1] != C.shape[1]:
        raise ShapeError(f"points have dimension {X.shape[1]}, centers {C.shape[1]}")
    return X[:, None, :] - C[None, :, :]


# -- checks -----------------------------------------------------------------

def _check_positive(name, v):
    v = float(v)
    if not (math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be finite and > 0, got {v}")
    return v


def _check_n(family, n):
    n = float(n)
    if not math.isfinite(n):
        raise DomainError("dimensionality must be finite")
    family = Family(family)
    if family in (Family.WINKLER_FUND, Family.WINKLER_GEN):
        if not 2 <= n <= 5:
            raise DomainError(f"{family.value} needs 2 <= n <= 5, got {n}")
    elif family in (Family.BERGER_FUND, Family.BERGER_GEN, Family.CONVDIFF_GEN):
        if n < 2:
            raise DomainError(f"{family.value} needs n >= 2, got {n}")
    elif n < 1:
        raise DomainError(f"{family.value} needs n >= 1, got {n}")
    return n


def _radii(r):
    r = np.asarray(r, dtype=np.float64)
    if not np.all(np.isfinite(r)) or np.any(r < 0):
        raise DomainError("distances must be finite and >= 0")
    return r


def _require_nonzero(family, r):
    if np.any(r == 0):
        raise SingularityError(f"{Family(family).value} kernel is singular at r = 0")


def _gamma_limit(nu):
    """(x/2)^nu / Gamma(nu + 1) divided by x^nu, i.e. 2^-nu / Gamma(nu + 1)."""
    return 2.0 ** (-nu) / math.gamma(nu + 1.0)


def _scaled_regular(kind, nu, x):
    """x^-nu * J_nu(x) (kind "J") or x^-nu * I_nu(x) (kind "I"), finite at x = 0."""
    out = np.full(x.shape, _gamma_limit(nu))
    big = x >= _TINY
    if np.any(big):
        xb = x[big]
        f = specfun.jy_pair(nu, xb)[0] if kind == "J" else specfun.ik_pair(nu, xb)[0]
        out[big] = xb ** (-nu) * f
    return out


# -- radial evaluators (array in, array out) --------------------------------

def _e_decay(n, lam, r):
    if n == 1:
        return math.sqrt(lam) / (2 * math.pi) * np.exp(-lam * r)
    _require_nonzero(Family.E_DECAY, r)
    nu = n / 2 - 1
    x = lam * r
    k = specfun.ik_pair(nu, x)[1]
    return lam ** (n - 0.5) / (2 * math.pi) * (2 * math.pi * x) ** (-nu) * k


def _e_osc(n, lam, r):
    if n == 1:
        return math.sqrt(lam) / (2 * math.pi) * np.exp(1j * lam * r)
    _require_nonzero(Family.E_OSC, r)
    nu = n / 2 - 1
    x = lam * r
    j, y = specfun.jy_pair(nu, x)
    # (-2 pi i x)^-nu on the principal branch = (2 pi x)^-nu e^{i pi nu / 2}
    phase = complex(math.cos(math.pi * nu / 2), math.sin(math.pi * nu / 2))
    return 0.25j * lam ** (n - 0.5) * phase * (2 * math.pi * x) ** (-nu) * (j + 1j * y)


def _hfj(n, lam, r):
    if n == 1:
        return math.sqrt(lam) / 2 * np.cos(lam * r)
    nu = n / 2 - 1
    x = lam * r
    return lam ** (n - 0.5) / (2 * math.pi) * (2 * math.pi) ** (-nu) * _scaled_regular("J", nu, x)


def _winkler_fund(n, s, r):
    _require_nonzero(Family.WINKLER_FUND, r)
    nu = n / 2 - 1
    x = s * r
    ker, kei = specfun.kelvin_ke_pair(nu, x)
    return 0.5j / math.pi * x ** (-nu) * (ker + 1j * kei)


def _winkler_gen(n, s, r):
    nu = n / 2 - 1
    x = s * r
    lim = _gamma_limit(nu) * complex(math.cos(0.75 * math.pi * nu), math.sin(0.75 * math.pi * nu))
    out = np.full(x.shape, lim, dtype=complex)
    big = x >= _TINY
    if np.any(big):
        xb = x[big]
        ber, bei = specfun.kelvin_be_pair(nu, xb)
        out[big] = xb ** (-nu) * (ber + 1j * bei)
    return out


def sphere_area(n):
    """Surface area of the unit sphere in n dimensions, 2 pi^(n/2)/Gamma(n/2)."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def _berger_fund(n, alpha, r):
    _require_nonzero(Family.BERGER_FUND, r)
    k_arg = alpha * r
    if n == 2:
        k0 = specfun.ik_pair(0.0, k_arg)[1]
        return -1.0 / (2 * math.pi * alpha ** 2) * (np.log(r) + k0)
    nu = n / 2 - 1
    k = specfun.ik_pair(nu, k_arg)[1]
    return r ** (2 - n) / ((n - 2) * sphere_area(n)) + (alpha / (2 * math.pi * r)) ** (-nu) * k


def _berger_gen(n, alpha, r):
    nu = n / 2 - 1
    x = alpha * r
    # (alpha/(2 pi r))^-nu I_nu(alpha r) = (2 pi / alpha^2)^nu x^nu * x^nu * (x^-nu I_nu(x))
    return 1.0 + (2 * math.pi / alpha ** 2) ** nu * x ** (2 * nu) * _scaled_regular("I", nu, x)


def _convdiff_radial(n, tau, r):
    nu = n / 2 - 1
    x = tau * r
    return tau ** (n - 0.5) / (2 * math.pi) * (2 * math.pi) ** (-nu) * _scaled_regular("I", nu, x)


_RADIAL = {
    Family.E_DECAY: _e_decay,
    Family.E_OSC: _e_osc,
    Family.HFJ: _hfj,
    Family.WINKLER_FUND: _winkler_fund,
    Family.WINKLER_GEN: _winkler_gen,
    Family.BERGER_FUND: _berger_fund,
    Family.BERGER_GEN: _berger_gen,
    Family.CONVDIFF_GEN: _convdiff_radial,
}


def radial(family, n, scale, r):
    """Evaluate the radial part of ``family`` on an array of distances.

    For ConvDiffGen this omits the drift factor e^{-v.d/2D}.
    """
    family = Family(family)
    n = _check_n(family, n)
    scale = _check_positive("scale", scale)
    return _RADIAL[family](n, scale, _radii(r))


def drift_factor(velocity, diffusivity, disp):
    """e^{-v.d/(2D)} for displacement vectors ``disp`` with shape (..., dim)."""
    v = np.asarray(velocity, dtype=np.float64)
    disp = np.asarray(disp, dtype=np.float64)
    if disp.shape[-1] != v.size:
        raise ShapeError(f"velocity has dimension {v.size}, displacements {disp.shape[-1]}")
    D = _check_positive("diffusivity", diffusivity)
    dot = np.zeros(disp.shape[:-1])
    for j in range(v.size):
        dot += v[j] * disp[..., j]
    return np.exp(-dot / (2 * D))


def tau_from_drift(velocity, diffusivity, k):
    """tau = sqrt((|v|/2D)^2 + k/D) for the exponentially transformed
    convection-diffusion-reaction operator."""
    D = _check_positive("diffusivity", diffusivity)
    speed = math.sqrt(math.fsum(float(c) ** 2 for c in velocity))
    t2 = (speed / (2 * D)) ** 2 + float(k) / D
    if not t2 > 0:
        raise DomainError("(|v|/2D)^2 + k/D must be > 0")
    return math.sqrt(t2)


# -- KernelSpec -----------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Drift:
    velocity: tuple
    diffusivity: float

    def __post_init__(self):
        object.__setattr__(self, "velocity", tuple(float(c) for c in self.velocity))
        _check_positive("diffusivity", self.diffusivity)
        if not all(math.isfinite(c) for c in self.velocity):
            raise DomainError("velocity must be finite")


@dataclasses.dataclass(frozen=True)
class KernelSpec:
    """A kernel family with its dimensionality ``n``, ``scale`` parameter,
    optional drift (ConvDiffGen only) and normalisation factor ``norm``."""

    family: Family
    n: float
    scale: float = 1.0
    drift: Drift | None = None
    norm: float = 1.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "n", _check_n(fam, self.n))
        object.__setattr__(self, "scale", _check_positive("scale", self.scale))
        if not math.isfinite(self.norm):
            raise DomainError("norm must be finite")
        object.__setattr__(self, "norm", float(self.norm))
        if fam is Family.CONVDIFF_GEN:
            if self.drift is None:
                raise DomainError("ConvDiffGen requires a drift (velocity, diffusivity)")
        elif self.drift is not None:
            raise DomainError("only ConvDiffGen takes a drift")

    @property
    def singular(self):
        return is_singular(self.family, self.n)

    @property
    def is_complex(self):
        return self.family in COMPLEX

    def with_scale(self, scale):
        return dataclasses.replace(self, scale=scale)

    def radial(self, r, scale=None):
        """Kernel value at distances r (drift factor excluded), times ``norm``."""
        s = self.scale if scale is None else scale
        return self.norm * radial(self.family, self.n, s, r)

    def matrix(self, points, centers, metric=ISOTROPIC, scale=None):
        """Kernel matrix K[p, c] = phi(scale * dist(points[p], centers[c])).

        ConvDiffGen includes the drift factor with displacement x - c.
        """
        r = pairwise_distance(metric, points, centers)
        out = self.radial(r, scale)
        if self.family is Family.CONVDIFF_GEN:
            out = out * drift_factor(self.drift.velocity, self.drift.diffusivity,
                                     displacements(points, centers))
        return out

    def to_dict(self):
        d = {"family": self.family.value, "n": self.n, "scale": self.scale, "norm": self.norm}
        if self.drift is not None:
            d["drift"] = {"velocity": list(self.drift.velocity),
                          "diffusivity": self.drift.diffusivity}
        return d

    @classmethod
    def from_dict(cls, d):
        drift = d.get("drift")
        if drift is not None:
            drift = Drift(tuple(drift["velocity"]), drift["diffusivity"])
        return cls(Family(d["family"]), d["n"], d.get("scale", 1.0), drift, d.get("norm", 1.0))


# -- public scalar-friendly wrappers ---------------------------------------

def _real_out(a):
    return float(a) if np.ndim(a) == 0 else a


def _complex_out(a):
    return ComplexValue.of(complex(a)) if np.ndim(a) == 0 else np.asarray(a, dtype=complex)


def eval_E_decay(n, lam, r):
    """Decaying exponential-type kernel."""
    return _real_out(radial(Family.E_DECAY, n, lam, r))


def eval_E_osc(n, lam, r):
    """Oscillatory kernel; returns ComplexValue for scalar r."""
    return _complex_out(radial(Family.E_OSC, n, lam, r))


def eval_phi_J(n, lam, r):
    """HF-J kernel, nonsingular for every n >= 1."""
    return _real_out(radial(Family.HFJ, n, lam, r))


def eval_plate_kernel(family, n, param, r):
    """Winkler or Berger kernel.  ``param`` is sqrt(kappa) for the Winkler
    families and alpha for the Berger families.  Always complex-typed."""
    family = Family(family)
    if family not in PLATE:
        raise DomainError(f"{family.value} is not a plate kernel")
    return _complex_out(radial(family, n, param, r))


def eval_convdiff_gen(n, tau, v, D, r_vec):
    """Drifted modified-Helmholtz general solution at displacement(s) r_vec
    with shape (dim,) or (..., dim)."""
    disp = np.asarray(r_vec, dtype=np.float64)
    if disp.ndim == 0:
        disp = disp.reshape(1)
    r = np.sqrt(np.sum(disp * disp, axis=-1))
    val = radial(Family.CONVDIFF_GEN, n, tau, r) * drift_factor(v, D, disp)
    return _real_out(val)


def kernel_matrix(spec, points, centers, metric=ISOTROPIC, scale=None):
    """Functional alias for ``spec.matrix``."""
    return spec.matrix(points, centers, metric, scale)
