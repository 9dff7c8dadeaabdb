# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled special-function core.

Line-for-line port of ``dfw._pycore``; see that module for the method notes.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport (asinh, copysign, cos, cosh, exp, fabs, isinf, lgamma, log,
                        pow, sin, sinh, sqrt, tgamma, INFINITY, NAN, M_PI)

cnp.import_array()

cdef extern from "<complex.h>" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double complex ccos(double complex)
    double complex csin(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cdef double EPS = 2.220446049250313e-16
cdef double FPMIN = 1e-300
cdef double START = 1e-200
cdef long MAXIT = 1000000
cdef double SERIES_LIMIT = 2.0
cdef double KELVIN_SERIES_LIMIT = 40.0
cdef double QUAD_STEP = 0.05

cdef double[28] RGAMMA
RGAMMA[:] = [
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
]

ctypedef struct pair:
    double a
    double b


cdef inline double asymptotic_switch(double nu) noexcept nogil:
    return 25.0 if nu * nu < 25.0 else nu * nu


cdef void temme_gammas(double mu, double* gam1, double* gam2,
                       double* gampl, double* gammi) noexcept nogil:
    cdef double s = mu * mu
    cdef double even = 0.0
    cdef double odd = 0.0
    cdef int k
    k = 26
    while k >= 0:
        even = even * s + RGAMMA[k]
        k -= 2
    k = 27
    while k > 0:
        odd = odd * s + RGAMMA[k]
        k -= 2
    gam1[0] = -odd
    gam2[0] = even
    gampl[0] = even + mu * odd
    gammi[0] = even - mu * odd


cdef pair temme_y(double mu, double x) noexcept nogil:
    cdef pair out
    cdef double x2 = 0.5 * x
    cdef double pimu = M_PI * mu
    cdef double fact = 1.0 if fabs(pimu) < EPS else pimu / sin(pimu)
    cdef double d = -log(x2)
    cdef double e = mu * d
    cdef double fact2 = 1.0 if fabs(e) < EPS else sinh(e) / e
    cdef double gam1, gam2, gampl, gammi
    temme_gammas(mu, &gam1, &gam2, &gampl, &gammi)
    cdef double ff = 2.0 / M_PI * fact * (gam1 * cosh(e) + gam2 * fact2 * d)
    e = exp(e)
    cdef double p = e / (gampl * M_PI)
    cdef double q = 1.0 / (e * M_PI * gammi)
    cdef double pimu2 = 0.5 * pimu
    cdef double fact3 = 1.0 if fabs(pimu2) < EPS else sin(pimu2) / pimu2
    cdef double r = M_PI * pimu2 * fact3 * fact3
    cdef double c = 1.0
    d = -x2 * x2
    cdef double total = ff + r * q
    cdef double total1 = p
    cdef double mu2 = mu * mu
    cdef double delta
    cdef long i
    for i in range(1, MAXIT):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * (ff + r * q)
        total += delta
        total1 += c * p - i * delta
        if fabs(delta) < (1.0 + fabs(total)) * EPS:
            out.a = -total
            out.b = -total1 * (2.0 / x)
            return out
    out.a = NAN
    out.b = NAN
    return out


cdef pair temme_k(double mu, double x) noexcept nogil:
    cdef pair out
    cdef double x2 = 0.5 * x
    cdef double pimu = M_PI * mu
    cdef double fact = 1.0 if fabs(pimu) < EPS else pimu / sin(pimu)
    cdef double d = -log(x2)
    cdef double e = mu * d
    cdef double fact2 = 1.0 if fabs(e) < EPS else sinh(e) / e
    cdef double gam1, gam2, gampl, gammi
    temme_gammas(mu, &gam1, &gam2, &gampl, &gammi)
    cdef double ff = fact * (gam1 * cosh(e) + gam2 * fact2 * d)
    cdef double total = ff
    e = exp(e)
    cdef double p = 0.5 * e / gampl
    cdef double q = 0.5 / (e * gammi)
    cdef double c = 1.0
    d = x2 * x2
    cdef double total1 = p
    cdef double mu2 = mu * mu
    cdef double delta
    cdef long i
    for i in range(1, MAXIT):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if fabs(delta) < fabs(total) * EPS:
            out.a = total
            out.b = total1 * (2.0 / x)
            return out
    out.a = NAN
    out.b = NAN
    return out


cdef pair steed_pq(double mu, double x) noexcept nogil:
    cdef pair out
    cdef double complex f = -0.5 / x + 1.0j
    cdef double complex c = f
    cdef double complex d = 0.0
    cdef double complex a, b, delta
    cdef double h
    cdef long k
    for k in range(1, MAXIT):
        if k == 1:
            a = ((0.25 - mu * mu) / x) * 1.0j
        else:
            h = k - 0.5
            a = h * h - mu * mu
        b = 2.0 * x + (2.0 * k) * 1.0j
        d = b + a * d
        if d == 0:
            d = FPMIN
        c = b + a / c
        if c == 0:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if fabs(creal(delta) - 1.0) + fabs(cimag(delta)) < EPS:
            out.a = creal(f)
            out.b = cimag(f)
            return out
    out.a = NAN
    out.b = NAN
    return out


cdef pair steed_k(double mu, double x) noexcept nogil:
    cdef pair out
    cdef double b = 2.0 * (1.0 + x)
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double delh = d
    cdef double q1 = 0.0
    cdef double q2 = 1.0
    cdef double a1 = 0.25 - mu * mu
    cdef double q = a1
    cdef double c = a1
    cdef double a = -a1
    cdef double s = 1.0 + q * delh
    cdef double qnew, dels, kmu
    cdef long i
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
        if fabs(dels / s) < EPS:
            h = a1 * h
            kmu = sqrt(M_PI / (2.0 * x)) * exp(-x) / s
            out.a = kmu
            out.b = kmu * (mu + x + 0.5 - h) / x
            return out
    out.a = NAN
    out.b = NAN
    return out


cdef pair hankel_pq(double nu, double x) noexcept nogil:
    cdef pair out
    cdef double m = 4.0 * nu * nu
    cdef double p = 1.0
    cdef double q = 0.0
    cdef double term = 1.0
    cdef double prev = INFINITY
    cdef double mag
    cdef int k = 1
    cdef int r
    while k < 200:
        term *= (m - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * x)
        mag = fabs(term)
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
        if mag < EPS * fabs(p):
            break
        prev = mag
        k += 1
    out.a = p
    out.b = q
    return out


cdef pair hankel_ik(double nu, double x) noexcept nogil:
    cdef pair out
    cdef double m = 4.0 * nu * nu
    cdef double si = 1.0
    cdef double sk = 1.0
    cdef double term = 1.0
    cdef double prev = INFINITY
    cdef double mag
    cdef int k
    for k in range(1, 200):
        term *= (m - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * x)
        mag = fabs(term)
        if mag >= prev:
            break
        sk += term
        if k % 2 == 0:
            si += term
        else:
            si -= term
        if mag < EPS * (fabs(si) if fabs(si) < fabs(sk) else fabs(sk)):
            break
        prev = mag
    out.a = si
    out.b = sk
    return out


cdef double recur_up(double mu, long nl, double x, double f0, double f1,
                     double sign) noexcept nogil:
    cdef double xi2 = 2.0 / x
    cdef double tmp
    cdef long i
    for i in range(1, nl + 1):
        if isinf(f1):
            return f1
        tmp = (mu + i) * xi2 * f1 + sign * f0
        f0 = f1
        f1 = tmp
    return f0


cdef double power_prefactor(double nu, double half_x) noexcept nogil:
    if nu < 170.0:
        return pow(half_x, nu) / tgamma(nu + 1.0)
    return exp(nu * log(half_x) - lgamma(nu + 1.0))


cdef double ascending_series(double nu, double x, double sign) noexcept nogil:
    cdef double half_x = 0.5 * x
    cdef double term = power_prefactor(nu, half_x)
    cdef double total = term
    cdef double q = sign * half_x * half_x
    cdef long k
    for k in range(1, MAXIT):
        term *= q / (k * (nu + k))
        total += term
        if fabs(term) <= EPS * fabs(total):
            return total
    return NAN


cdef pair c_bessel_jy(double nu, double x) noexcept nogil:
    cdef pair out, pq, ym
    cdef double chi, amp, cs, sn
    cdef long nl
    cdef double mu, xi, xi2, w, h, b, d, c, delta
    cdef double rjl, rjpl, rjl1, fact, rjtemp, f, gam, rjmu, rymu, rymup, ry1
    cdef int isign = 1
    cdef bint converged = False
    cdef long it
    if x >= asymptotic_switch(nu):
        pq = hankel_pq(nu, x)
        chi = x - (0.5 * nu + 0.25) * M_PI
        amp = sqrt(2.0 / (M_PI * x))
        cs = cos(chi)
        sn = sin(chi)
        out.a = amp * (pq.a * cs - pq.b * sn)
        out.b = amp * (pq.a * sn + pq.b * cs)
        return out
    if x < SERIES_LIMIT:
        nl = <long>(nu + 0.5)
        mu = nu - nl
        ym = temme_y(mu, x)
        out.a = ascending_series(nu, x, -1.0)
        out.b = recur_up(mu, nl, x, ym.a, ym.b, -1.0)
        return out
    nl = <long>(nu - x + 1.5)
    if nl < 0:
        nl = 0
    mu = nu - nl
    xi = 1.0 / x
    xi2 = 2.0 * xi
    w = xi2 / M_PI
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = xi2 * nu
    d = 0.0
    c = h
    for it in range(MAXIT):
        b += xi2
        d = b - d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b - 1.0 / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        h = delta * h
        if d < 0.0:
            isign = -isign
        if fabs(delta - 1.0) < EPS:
            converged = True
            break
    if not converged:
        out.a = NAN
        out.b = NAN
        return out
    rjl = isign * START
    rjpl = h * rjl
    rjl1 = rjl
    fact = nu * xi
    for it in range(nl):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    if rjl == 0.0:
        rjl = EPS
    f = rjpl / rjl
    pq = steed_pq(mu, x)
    gam = (pq.a - f) / pq.b
    rjmu = sqrt(w / ((pq.a - f) * gam + pq.b))
    rjmu = copysign(rjmu, rjl)
    rymu = rjmu * gam
    rymup = rymu * (pq.a + pq.b / gam)
    ry1 = mu * xi * rymu - rymup
    out.a = rjl1 * (rjmu / rjl)
    out.b = recur_up(mu, nl, x, rymu, ry1, -1.0)
    return out


cdef pair c_bessel_ik(double nu, double x) noexcept nogil:
    cdef pair out, s, km
    cdef double ex
    cdef long nl = <long>(nu + 0.5)
    cdef double mu = nu - nl
    cdef double xi, h, b, d, c, delta, ril, ripl, ril1, fact, ritemp, f
    cdef double rkmup, den, rimu
    cdef bint converged = False
    cdef long it
    if x >= asymptotic_switch(nu):
        s = hankel_ik(nu, x)
        if x > 700.0:
            out.a = INFINITY
            out.b = 0.0 if x > 745.0 else sqrt(M_PI / (2.0 * x)) * exp(-x) * s.b
            return out
        ex = exp(x)
        out.a = ex / sqrt(2.0 * M_PI * x) * s.a
        out.b = sqrt(M_PI / (2.0 * x)) / ex * s.b
        return out
    if x < SERIES_LIMIT:
        km = temme_k(mu, x)
        out.a = ascending_series(nu, x, 1.0)
        out.b = recur_up(mu, nl, x, km.a, km.b, 1.0)
        return out
    xi = 1.0 / x
    h = nu * xi
    if h < FPMIN:
        h = FPMIN
    b = 2.0 * xi * nu
    d = 0.0
    c = h
    for it in range(MAXIT):
        b += 2.0 * xi
        d = 1.0 / (b + d)
        c = b + 1.0 / c
        delta = c * d
        h = delta * h
        if fabs(delta - 1.0) < EPS:
            converged = True
            break
    if not converged:
        out.a = NAN
        out.b = NAN
        return out
    ril = START
    ripl = h * ril
    ril1 = ril
    fact = nu * xi
    for it in range(nl):
        ritemp = fact * ril + ripl
        fact -= xi
        ripl = fact * ritemp + ril
        ril = ritemp
    f = ripl / ril
    km = steed_k(mu, x)
    rkmup = mu * xi * km.a - km.b
    den = f * km.a - rkmup
    rimu = xi / den if den != 0.0 else INFINITY
    out.a = rimu * ril1 / ril
    out.b = recur_up(mu, nl, x, km.a, km.b, 1.0)
    return out


cdef pair kelvin_series(double nu, double x) noexcept nogil:
    cdef pair out
    cdef double half_x = 0.5 * x
    cdef double mag = power_prefactor(nu, half_x)
    cdef double theta = 0.75 * nu * M_PI
    cdef double c0 = cos(theta)
    cdef double s0 = sin(theta)
    cdef double[4] cyc_c
    cdef double[4] cyc_s
    cyc_c[0] = c0
    cyc_c[1] = -s0
    cyc_c[2] = -c0
    cyc_c[3] = s0
    cyc_s[0] = s0
    cyc_s[1] = c0
    cyc_s[2] = -s0
    cyc_s[3] = -c0
    cdef double ber = mag * c0
    cdef double bei = mag * s0
    cdef double q = half_x * half_x
    cdef long k
    for k in range(1, MAXIT):
        mag *= q / (k * (nu + k))
        ber += mag * cyc_c[k % 4]
        bei += mag * cyc_s[k % 4]
        if mag < EPS * (fabs(ber) + fabs(bei)) or mag == 0.0:
            out.a = ber
            out.b = bei
            return out
    out.a = NAN
    out.b = NAN
    return out


cdef double complex hankel_j_complex(double nu, double complex z) noexcept nogil:
    cdef double m = 4.0 * nu * nu
    cdef double complex p = 1.0
    cdef double complex q = 0.0
    cdef double complex term = 1.0
    cdef double complex chi
    cdef double prev = INFINITY
    cdef double mag
    cdef int k, r
    for k in range(1, 200):
        term = term * ((m - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * z))
        mag = cabs(term)
        if mag >= prev:
            break
        r = k % 4
        if r == 1:
            q = q + term
        elif r == 2:
            p = p - term
        elif r == 3:
            q = q - term
        else:
            p = p + term
        if mag < EPS * cabs(p):
            break
        prev = mag
    chi = z - (0.5 * nu + 0.25) * M_PI
    return csqrt(2.0 / (M_PI * z)) * (p * ccos(chi) - q * csin(chi))


cdef pair c_kelvin_be(double nu, double x) noexcept nogil:
    cdef pair out
    cdef double complex z, val
    if x <= KELVIN_SERIES_LIMIT:
        return kelvin_series(nu, x)
    z = x * cos(0.75 * M_PI) + (x * sin(0.75 * M_PI)) * 1.0j
    val = hankel_j_complex(nu, z)
    out.a = creal(val)
    out.b = cimag(val)
    return out


cdef double complex k_complex_quad(double nu, double complex z) noexcept nogil:
    cdef double h = QUAD_STEP
    cdef double a = creal(z)
    cdef double t_peak = asinh(nu / a) if a > 0.0 else 0.0
    cdef double complex total = 0.5 * cexp(-z)
    cdef double complex term
    cdef double t
    cdef long j
    for j in range(1, MAXIT):
        t = j * h
        term = cexp(-z * cosh(t)) * cosh(nu * t)
        total = total + term
        if t > t_peak and cabs(term) < 1e-18 * cabs(total):
            return total * h
    return NAN


cdef double complex k_complex_asym(double nu, double complex z) noexcept nogil:
    cdef double m = 4.0 * nu * nu
    cdef double complex s = 1.0
    cdef double complex term = 1.0
    cdef double prev = INFINITY
    cdef double mag
    cdef int k
    for k in range(1, 200):
        term = term * ((m - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * z))
        mag = cabs(term)
        if mag >= prev:
            break
        s = s + term
        if mag < EPS * cabs(s):
            break
        prev = mag
    return csqrt(M_PI / (2.0 * z)) * cexp(-z) * s


cdef pair c_kelvin_ke(double nu, double x) noexcept nogil:
    cdef pair out
    cdef double complex z = x * cos(0.25 * M_PI) + (x * sin(0.25 * M_PI)) * 1.0j
    cdef double complex kz, val
    cdef double lim = 2.0 * nu * nu
    if lim < 17.0:
        lim = 17.0
    if x >= lim:
        kz = k_complex_asym(nu, z)
    else:
        kz = k_complex_quad(nu, z)
    val = (cos(-0.5 * nu * M_PI) + sin(-0.5 * nu * M_PI) * 1.0j) * kz
    out.a = creal(val)
    out.b = cimag(val)
    return out


def asymptotic_switch_py(double nu):
    return asymptotic_switch(nu)


def bessel_jy(double nu, double x):
    """(J_nu(x), Y_nu(x)) for nu >= 0, x > 0."""
    cdef pair r = c_bessel_jy(nu, x)
    return r.a, r.b


def bessel_ik(double nu, double x):
    """(I_nu(x), K_nu(x)) for nu >= 0, x > 0."""
    cdef pair r = c_bessel_ik(nu, x)
    return r.a, r.b


def kelvin_be(double nu, double x):
    """(ber_nu(x), bei_nu(x)) for nu >= 0, x >= 0."""
    cdef pair r = c_kelvin_be(nu, x)
    return r.a, r.b


def kelvin_ke(double nu, double x):
    """(ker_nu(x), kei_nu(x)) for nu >= 0, x > 0."""
    cdef pair r = c_kelvin_ke(nu, x)
    return r.a, r.b


ctypedef pair (*pairfunc)(double, double) noexcept nogil


cdef tuple _pairwise(pairfunc func, double nu, x):
    arr = np.asarray(x, dtype=np.float64)
    cdef const double[::1] flat = np.ascontiguousarray(arr.ravel())
    cdef Py_ssize_t n = flat.shape[0]
    a = np.empty(n, dtype=np.float64)
    b = np.empty(n, dtype=np.float64)
    cdef double[::1] av = a
    cdef double[::1] bv = b
    cdef Py_ssize_t i
    cdef pair r
    with nogil:
        for i in range(n):
            r = func(nu, flat[i])
            av[i] = r.a
            bv[i] = r.b
    return a.reshape(arr.shape), b.reshape(arr.shape)


def jy_array(double nu, x):
    return _pairwise(c_bessel_jy, nu, x)


def ik_array(double nu, x):
    return _pairwise(c_bessel_ik, nu, x)


def kelvin_be_array(double nu, x):
    return _pairwise(c_kelvin_be, nu, x)


def kelvin_ke_array(double nu, x):
    return _pairwise(c_kelvin_ke, nu, x)
