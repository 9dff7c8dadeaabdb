"""Pure-Python special-function core.

Reference implementation of the scalar Bessel and Kelvin kernels.  The
compiled extension ``dfw._ccore`` mirrors this module function for function;
``dfw._backend`` picks one of the two at import time.

Methods, for real order nu >= 0 and argument x > 0:

* ``x < 2``: ascending power series for J and I.  Y and K come from Temme's
  series for orders mu, mu+1 with |mu| <= 1/2, which stays continuous through
  integer orders (the log terms are built in), then forward recurrence.
* ``2 <= x < max(25, nu**2)``: continued fraction for J'/J (I'/I) plus downward
  recurrence, Steed's complex continued fraction for (J' + iY')/(J + iY)
  (Temme's for K), normalised through the Wronskian.
* ``x >= max(25, nu**2)``: Hankel asymptotic expansions.

Kelvin functions follow the convention

    ber_nu(x) + i bei_nu(x) = J_nu(x exp(3 pi i / 4))
    ker_nu(x) + i kei_nu(x) = exp(-nu pi i / 2) K_nu(x exp(pi i / 4))

ber/bei use the ascending series up to x = 40 and the complex Hankel expansion
beyond.  K at the complex argument uses trapezoidal quadrature of
K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt below |z| = max(17, 2 nu**2)
and the asymptotic expansion above.

Non-convergence is reported as NaN; overflow surfaces as inf.  Callers in
``dfw.specfun`` turn both into exceptions.
"""

import cmath
import math

import numpy as np

EPS = 2.220446049250313e-16
FPMIN = 1e-300
START = 1e-200
MAXIT = 1000000
SERIES_LIMIT = 2.0
KELVIN_SERIES_LIMIT = 40.0
QUAD_STEP = 0.05
NAN = float("nan")
INF = float("inf")

# Taylor coefficients of 1/Gamma(1 + z) about z = 0.
_RGAMMA = (
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
)


def asymptotic_switch(nu):
    return max(25.0, nu * nu)


def _temme_gammas(mu):
    """Return (gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)) for |mu| <= 1/2."""
    s = mu * mu
    even = 0.0
    odd = 0.0
    for k in range(26, -1, -2):
        even = even * s + _RGAMMA[k]
    for k in range(27, 0, -2):
        odd = odd * s + _RGAMMA[k]
    return -odd, even, even + mu * odd, even - mu * odd


def _temme_y(mu, x):
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = 2.0 / math.pi * fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    e = math.exp(e)
    p = e / (gampl * math.pi)
    q = 1.0 / (e * math.pi * gammi)
    pimu2 = 0.5 * pimu
    fact3 = 1.0 if abs(pimu2) < EPS else math.sin(pimu2) / pimu2
    r = math.pi * pimu2 * fact3 * fact3
    c = 1.0
    d = -x2 * x2
    total = ff + r * q
    total1 = p
    mu2 = mu * mu
    for i in range(1, MAXIT):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * (ff + r * q)
        total += delta
        total1 += c * p - i * delta
        if abs(delta) < (1.0 + abs(total)) * EPS:
            return -total, -total1 * (2.0 / x)
    return NAN, NAN


def _temme_k(mu, x):
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    total1 = p
    mu2 = mu * mu
    for i in range(1, MAXIT):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if abs(delta) < abs(total) * EPS:
            return total, total1 * (2.0 / x)
    return NAN, NAN


def _steed_pq(mu, x):
    """p + iq = (J' + iY')/(J + iY) at order mu, by modified Lentz."""
    f = complex(-0.5 / x, 1.0)
    c = f
    d = 0j
    for k in range(1, MAXIT):
        if k == 1:
            a = complex(0.0, (0.25 - mu * mu) / x)
        else:
            h = k - 0.5
            a = complex(h * h - mu * mu, 0.0)
        b = complex(2.0 * x, 2.0 * k)
        d = b + a * d
        if d == 0:
            d = complex(FPMIN, 0.0)
        c = b + a / c
        if c == 0:
            c = complex(FPMIN, 0.0)
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < EPS:
            return f.real, f.imag
    return NAN, NAN


def _steed_k(mu, x):
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < EPS:
            h = a1 * h
            kmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
            return kmu, kmu * (mu + x + 0.5 - h) / x
    return NAN, NAN


def _hankel_pq(nu, x):
    """Asymptotic P, Q sums for J/Y at large real x."""
    m = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    k = 1
    prev = INF
    while k < 200:
        term *= (m - (2 * k - 1) ** 2) / (8.0 * k * x)
        mag = abs(term)
        if mag >= prev:
            break
        if k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        elif k % 4 == 3:
            q -= term
        else:
            p += term
        if mag < EPS * abs(p):
            break
        prev = mag
        k += 1
    return p, q


def _hankel_ik(nu, x):
    """Asymptotic sums S_I = sum (-1)^k a_k / x^k and S_K = sum a_k / x^k."""
    m = 4.0 * nu * nu
    si = 1.0
    sk = 1.0
    term = 1.0
    prev = INF
    for k in range(1, 200):
        term *= (m - (2 * k - 1) ** 2) / (8.0 * k * x)
        mag = abs(term)
        if mag >= prev:
            break
        sk += term
        si += term if k % 2 == 0 else -term
        if mag < EPS * min(abs(si), abs(sk)):
            break
        prev = mag
    return si, sk


def _recur_up(mu, nl, x, f0, f1, sign):
    """Forward recurrence from orders (mu, mu+1) to mu+nl.

    sign=-1: Y_{a+1} = (2a/x) Y_a - Y_{a-1};  sign=+1: K_{a+1} = (2a/x) K_a + K_{a-1}.
    """
    xi2 = 2.0 / x
    for i in range(1, nl + 1):
        if math.isinf(f1):
            # higher orders only grow; avoid inf - inf
            return f1
        f0, f1 = f1, (mu + i) * xi2 * f1 + sign * f0
    return f0


def bessel_jy(nu, x):
    """(J_nu(x), Y_nu(x)) for nu >= 0, x > 0."""
    if x >= asymptotic_switch(nu):
        p, q = _hankel_pq(nu, x)
        chi = x - (0.5 * nu + 0.25) * math.pi
        amp = math.sqrt(2.0 / (math.pi * x))
        cs = math.cos(chi)
        sn = math.sin(chi)
        return amp * (p * cs - q * sn), amp * (p * sn + q * cs)
    if x < SERIES_LIMIT:
        nl = int(nu + 0.5)
        mu = nu - nl
        rymu, ry1 = _temme_y(mu, x)
        return _ascending_series(nu, x, -1.0), _recur_up(mu, nl, x, rymu, ry1, -1.0)
    nl = max(0, int(nu - x + 1.5))
    mu = nu - nl
    xi = 1.0 / x
    xi2 = 2.0 * xi
    w = xi2 / math.pi
    isign = 1
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = xi2 * nu
    d = 0.0
    c = h
    converged = False
    for _ in range(MAXIT):
        b += xi2
        d = b - d
        if abs(d) < FPMIN:
            d = FPMIN
        c = b - 1.0 / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        h = delta * h
        if d < 0.0:
            isign = -isign
        if abs(delta - 1.0) < EPS:
            converged = True
            break
    if not converged:
        return NAN, NAN
    rjl = isign * START
    rjpl = h * rjl
    rjl1 = rjl
    fact = nu * xi
    for _ in range(nl):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    if rjl == 0.0:
        rjl = EPS
    f = rjpl / rjl
    p, q = _steed_pq(mu, x)
    gam = (p - f) / q
    rjmu = math.sqrt(w / ((p - f) * gam + q))
    rjmu = math.copysign(rjmu, rjl)
    rymu = rjmu * gam
    rymup = rymu * (p + q / gam)
    ry1 = mu * xi * rymu - rymup
    return rjl1 * (rjmu / rjl), _recur_up(mu, nl, x, rymu, ry1, -1.0)


def bessel_ik(nu, x):
    """(I_nu(x), K_nu(x)) for nu >= 0, x > 0."""
    if x >= asymptotic_switch(nu):
        si, sk = _hankel_ik(nu, x)
        if x > 700.0:
            big = INF
            small = 0.0 if x > 745.0 else math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * sk
            return big, small
        ex = math.exp(x)
        return ex / math.sqrt(2.0 * math.pi * x) * si, math.sqrt(math.pi / (2.0 * x)) / ex * sk
    nl = int(nu + 0.5)
    mu = nu - nl
    if x < SERIES_LIMIT:
        rkmu, rk1 = _temme_k(mu, x)
        return _ascending_series(nu, x, 1.0), _recur_up(mu, nl, x, rkmu, rk1, 1.0)
    xi = 1.0 / x
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = 2.0 * xi * nu
    d = 0.0
    c = h
    converged = False
    for _ in range(MAXIT):
        b += 2.0 * xi
        d = 1.0 / (b + d)
        c = b + 1.0 / c
        delta = c * d
        h = delta * h
        if abs(delta - 1.0) < EPS:
            converged = True
            break
    if not converged:
        return NAN, NAN
    ril = START
    ripl = h * ril
    ril1 = ril
    fact = nu * xi
    for _ in range(nl):
        ritemp = fact * ril + ripl
        fact -= xi
        ripl = fact * ritemp + ril
        ril = ritemp
    f = ripl / ril
    rkmu, rk1 = _steed_k(mu, x)
    rkmup = mu * xi * rkmu - rk1
    den = f * rkmu - rkmup
    rimu = xi / den if den != 0.0 else INF
    return rimu * ril1 / ril, _recur_up(mu, nl, x, rkmu, rk1, 1.0)


def _power_prefactor(nu, half_x):
    # (x/2)^nu / Gamma(nu + 1)
    if nu < 170.0:
        return half_x ** nu / math.gamma(nu + 1.0)
    return math.exp(nu * math.log(half_x) - math.lgamma(nu + 1.0))


def _ascending_series(nu, x, sign):
    """(x/2)^nu sum (sign x^2/4)^k / (k! Gamma(nu+k+1)); J for sign=-1, I for +1."""
    half_x = 0.5 * x
    term = _power_prefactor(nu, half_x)
    total = term
    q = sign * half_x * half_x
    for k in range(1, MAXIT):
        term *= q / (k * (nu + k))
        total += term
        if abs(term) <= EPS * abs(total):
            return total
    return NAN


def _kelvin_series(nu, x):
    half_x = 0.5 * x
    mag = _power_prefactor(nu, half_x)
    theta = 0.75 * nu * math.pi
    c0 = math.cos(theta)
    s0 = math.sin(theta)
    # cos/sin of theta + k pi / 2 cycle with period 4.
    cyc_c = (c0, -s0, -c0, s0)
    cyc_s = (s0, c0, -s0, -c0)
    ber = mag * c0
    bei = mag * s0
    q = half_x * half_x
    for k in range(1, MAXIT):
        mag *= q / (k * (nu + k))
        ber += mag * cyc_c[k % 4]
        bei += mag * cyc_s[k % 4]
        if mag < EPS * (abs(ber) + abs(bei)) or mag == 0.0:
            return ber, bei
    return NAN, NAN


def _hankel_j_complex(nu, z):
    m = 4.0 * nu * nu
    p = 1.0 + 0j
    q = 0j
    term = 1.0 + 0j
    prev = INF
    for k in range(1, 200):
        term *= (m - (2 * k - 1) ** 2) / (8.0 * k * z)
        mag = abs(term)
        if mag >= prev:
            break
        r = k % 4
        if r == 1:
            q += term
        elif r == 2:
            p -= term
        elif r == 3:
            q -= term
        else:
            p += term
        if mag < EPS * abs(p):
            break
        prev = mag
    chi = z - (0.5 * nu + 0.25) * math.pi
    return cmath.sqrt(2.0 / (math.pi * z)) * (p * cmath.cos(chi) - q * cmath.sin(chi))


def kelvin_be(nu, x):
    """(ber_nu(x), bei_nu(x)) for nu >= 0, x >= 0."""
    if x <= KELVIN_SERIES_LIMIT:
        return _kelvin_series(nu, x)
    z = cmath.rect(x, 0.75 * math.pi)
    try:
        val = _hankel_j_complex(nu, z)
    except OverflowError:
        return INF, INF
    return val.real, val.imag


def _k_complex_quad(nu, z):
    h = QUAD_STEP
    a = z.real
    t_peak = math.asinh(nu / a) if a > 0.0 else 0.0
    total = 0.5 * cmath.exp(-z)
    for j in range(1, MAXIT):
        t = j * h
        ct = math.cosh(t)
        term = cmath.exp(-z * ct) * math.cosh(nu * t)
        total += term
        if t > t_peak and abs(term) < 1e-18 * abs(total):
            return total * h
    return complex(NAN, NAN)


def _k_complex_asym(nu, z):
    m = 4.0 * nu * nu
    s = 1.0 + 0j
    term = 1.0 + 0j
    prev = INF
    for k in range(1, 200):
        term *= (m - (2 * k - 1) ** 2) / (8.0 * k * z)
        mag = abs(term)
        if mag >= prev:
            break
        s += term
        if mag < EPS * abs(s):
            break
        prev = mag
    return cmath.sqrt(math.pi / (2.0 * z)) * cmath.exp(-z) * s


def kelvin_ke(nu, x):
    """(ker_nu(x), kei_nu(x)) for nu >= 0, x > 0."""
    z = cmath.rect(x, 0.25 * math.pi)
    if x >= max(17.0, 2.0 * nu * nu):
        kz = _k_complex_asym(nu, z)
    else:
        try:
            kz = _k_complex_quad(nu, z)
        except OverflowError:
            return INF, INF
    val = cmath.exp(complex(0.0, -0.5 * nu * math.pi)) * kz
    return val.real, val.imag


def _pairwise(func, nu, x):
    x = np.asarray(x, dtype=np.float64)
    flat = x.ravel()
    a = np.empty_like(flat)
    b = np.empty_like(flat)
    for i in range(flat.size):
        a[i], b[i] = func(nu, float(flat[i]))
    return a.reshape(x.shape), b.reshape(x.shape)


def jy_array(nu, x):
    return _pairwise(bessel_jy, nu, x)


def ik_array(nu, x):
    return _pairwise(bessel_ik, nu, x)


def kelvin_be_array(nu, x):
    return _pairwise(kelvin_be, nu, x)


def kelvin_ke_array(nu, x):
    return _pairwise(kelvin_ke, nu, x)
