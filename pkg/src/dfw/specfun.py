"""Real-order Bessel and Kelvin functions.

Public orders are restricted to nu >= 0.  The kernel modules reach orders in
[-1/2, 0) (fractional dimensions 1 < n < 2) through the ``*_pair`` helpers,
which apply the reflection formulas

    J_-a = cos(a pi) J_a - sin(a pi) Y_a      Y_-a = sin(a pi) J_a + cos(a pi) Y_a
    I_-a = I_a + (2/pi) sin(a pi) K_a         K_-a = K_a

Kelvin convention (the one used by DLMF and mpmath):

    ber_nu(x) + i bei_nu(x) = J_nu(x e^{3 pi i/4})
    ker_nu(x) + i kei_nu(x) = e^{-nu pi i/2} K_nu(x e^{pi i/4})

Switchover radii and methods are documented in ``dfw._pycore``; the
asymptotic expansions take over at x = max(25, nu**2).
"""

import enum
import math

import numpy as np

from . import _backend, _pycore
from .errors import ConvergenceError, DomainError, NumericalOverflowError, SingularityError

MIN_INTERNAL_ORDER = -0.5


class BesselKind(str, enum.Enum):
    J = "J"
    Y = "Y"
    I = "I"  # noqa: E741
    K = "K"


class KelvinKind(str, enum.Enum):
    BER = "ber"
    BEI = "bei"
    KER = "ker"
    KEI = "kei"


def switchover_radius(order):
    """Argument above which the asymptotic expansions are used."""
    return _pycore.asymptotic_switch(float(order))


def _as_array(x):
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


def _check_order(order, lowest):
    order = float(order)
    if not math.isfinite(order) or order < lowest:
        raise DomainError(f"order must be finite and >= {lowest}, got {order}")
    return order


def _check_result(name, *arrays):
    for a in arrays:
        if np.any(np.isnan(a)):
            raise ConvergenceError(f"{name}: evaluation did not converge")
        if np.any(np.isinf(a)):
            raise NumericalOverflowError(f"{name}: result exceeds the floating point range")


def _positive_part(func, nu, x, zero_a, zero_b):
    """Run a pairwise core function on x > 0 and fill x == 0 with given values."""
    a = np.empty_like(x)
    b = np.empty_like(x)
    pos = x > 0
    if np.all(pos):
        return func(nu, x)
    if np.any(pos):
        a[pos], b[pos] = func(nu, x[pos])
    a[~pos] = zero_a
    b[~pos] = zero_b
    return a, b


def jy_pair(order, x):
    """(J, Y) arrays for order >= -1/2 and x > 0."""
    nu = _check_order(order, MIN_INTERNAL_ORDER)
    x = _as_array(x)
    if np.any(x <= 0):
        raise DomainError("J/Y pair requires x > 0")
    a = abs(nu)
    j, y = _backend.core.jy_array(a, x)
    if nu < 0:
        c, s = math.cos(a * math.pi), math.sin(a * math.pi)
        j, y = c * j - s * y, s * j + c * y
    _check_result("J/Y", j, y)
    return j, y


def ik_pair(order, x):
    """(I, K) arrays for order >= -1/2 and x > 0."""
    nu = _check_order(order, MIN_INTERNAL_ORDER)
    x = _as_array(x)
    if np.any(x <= 0):
        raise DomainError("I/K pair requires x > 0")
    a = abs(nu)
    i, k = _backend.core.ik_array(a, x)
    if nu < 0:
        i = i + (2.0 / math.pi) * math.sin(a * math.pi) * k
    _check_result("I/K", i, k)
    return i, k


def bessel(kind, order, x):
    """Bessel function of real order >= 0.

    J and I accept x >= 0, Y and K need x > 0.  Scalars in give floats out,
    arrays give arrays.  Raises DomainError outside the domain,
    NumericalOverflowError when the value is not representable.
    """
    kind = BesselKind(kind)
    nu = _check_order(order, 0.0)
    arr = _as_array(x)
    if kind in (BesselKind.Y, BesselKind.K):
        if np.any(arr <= 0):
            raise DomainError(f"{kind.value}_nu(x) requires x > 0")
    elif np.any(arr < 0):
        raise DomainError(f"{kind.value}_nu(x) requires x >= 0")
    at_zero = 1.0 if nu == 0.0 else 0.0
    if kind in (BesselKind.J, BesselKind.Y):
        f = _backend.core.jy_array
    else:
        f = _backend.core.ik_array
    a, b = _positive_part(f, nu, arr, at_zero, 0.0)
    out = a if kind in (BesselKind.J, BesselKind.I) else b
    _check_result(f"{kind.value}_{nu}", out)
    return float(out) if out.ndim == 0 else out


def kelvin_be_pair(order, x):
    """(ber, bei) arrays for order >= 0 and x >= 0."""
    nu = _check_order(order, 0.0)
    x = _as_array(x)
    if np.any(x < 0):
        raise DomainError("ber/bei require x >= 0")
    at_zero = 1.0 if nu == 0.0 else 0.0
    a, b = _positive_part(_backend.core.kelvin_be_array, nu, x, at_zero, 0.0)
    _check_result("ber/bei", a, b)
    return a, b


def kelvin_ke_pair(order, x):
    """(ker, kei) arrays for order >= 0 and x > 0."""
    nu = _check_order(order, 0.0)
    x = _as_array(x)
    if np.any(x <= 0):
        raise SingularityError("ker/kei require x > 0")
    a, b = _backend.core.kelvin_ke_array(nu, x)
    _check_result("ker/kei", a, b)
    return a, b


def kelvin(kind, order, x):
    """Kelvin function of real order >= 0 (convention in the module docstring)."""
    kind = KelvinKind(kind)
    arr = _as_array(x)
    if kind in (KelvinKind.BER, KelvinKind.BEI):
        a, b = kelvin_be_pair(order, arr)
        out = a if kind is KelvinKind.BER else b
    else:
        if np.any(arr <= 0):
            raise DomainError(f"{kind.value}_nu(x) requires x > 0")
        a, b = kelvin_ke_pair(order, arr)
        out = a if kind is KelvinKind.KER else b
    return float(out) if out.ndim == 0 else out
