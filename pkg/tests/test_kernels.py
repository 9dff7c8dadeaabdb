import math

import mpmath
import numpy as np
import pytest

from dfw import kernels
from dfw.errors import DomainError, ShapeError, SingularityError
from dfw.kernels import ComplexValue, DistanceMetric, Drift, Family, KernelSpec

mpmath.mp.dps = 30


def test_distance_examples():
    iso = DistanceMetric.isotropic()
    assert kernels.distance(iso, (0, 0), (3, 4)) == 5.0
    assert kernels.distance(DistanceMetric.anisotropic((4, 1)), (0, 0), (1, 1)) == pytest.approx(math.sqrt(5))
    rng = np.random.default_rng(0)
    ones = DistanceMetric.anisotropic((1, 1, 1))
    for _ in range(20):
        x, c = rng.normal(size=3), rng.normal(size=3)
        assert kernels.distance(ones, x, c) == kernels.distance(iso, x, c)
        assert kernels.distance(iso, x, c) == kernels.distance(iso, c, x)
    assert kernels.distance(iso, (1.5, 2), (1.5, 2)) == 0.0


def test_distance_errors():
    with pytest.raises(ShapeError):
        kernels.distance(DistanceMetric.isotropic(), (0, 0), (1, 1, 1))
    with pytest.raises(ShapeError):
        kernels.distance(DistanceMetric.anisotropic((1, 2)), (0, 0, 0), (1, 1, 1))
    with pytest.raises(DomainError):
        DistanceMetric.anisotropic((1, -2))
    with pytest.raises(DomainError):
        DistanceMetric("manhattan")


def test_pairwise_matches_scalar_distance():
    rng = np.random.default_rng(1)
    P, C = rng.normal(size=(7, 2)), rng.normal(size=(4, 2))
    m = DistanceMetric.anisotropic((2.0, 0.5))
    R = kernels.pairwise_distance(m, P, C)
    for i in range(7):
        for j in range(4):
            assert R[i, j] == pytest.approx(kernels.distance(m, P[i], C[j]), rel=1e-15)
    assert np.array_equal(kernels.pairwise_distance(kernels.ISOTROPIC, P, C),
                          kernels.pairwise_distance(DistanceMetric.anisotropic((1, 1)), P, C))


def test_n1_branches():
    assert kernels.eval_E_decay(1, 1, 0) == pytest.approx(1 / (2 * math.pi))
    z = complex(kernels.eval_E_osc(1, 1, math.pi))
    assert z.real == pytest.approx(-1 / (2 * math.pi)) and abs(z.imag) < 1e-15
    lam = 2.3
    z0 = kernels.eval_E_osc(1, lam, 0)
    assert isinstance(z0, ComplexValue)
    assert (z0.re, z0.im) == (pytest.approx(math.sqrt(lam) / (2 * math.pi)), 0.0)
    assert kernels.eval_phi_J(1, 4, 0) == 1.0


def _mp_general(family, n, p, r):
    """Direct mpmath evaluation of the printed formulas."""
    nu = mpmath.mpf(n) / 2 - 1
    n, p, r = mpmath.mpf(n), mpmath.mpf(p), mpmath.mpf(r)
    x = p * r
    if family == "EDecay":
        return p ** (n - 0.5) / (2 * mpmath.pi) * (2 * mpmath.pi * x) ** (-nu) * mpmath.besselk(nu, x)
    if family == "EOsc":
        return 1j * p ** (n - 0.5) / 4 * (-2j * mpmath.pi * x) ** (-nu) * mpmath.hankel1(nu, x)
    if family == "HFJ":
        return p ** (n - 0.5) / (2 * mpmath.pi) * (2 * mpmath.pi * x) ** (-nu) * mpmath.besselj(nu, x)
    if family == "WinklerFund":
        return 1j / (2 * mpmath.pi) * x ** (-nu) * (mpmath.ker(nu, x) + 1j * mpmath.kei(nu, x))
    if family == "WinklerGen":
        return x ** (-nu) * (mpmath.ber(nu, x) + 1j * mpmath.bei(nu, x))
    if family == "BergerFund":
        if n == 2:
            return -(mpmath.log(r) + mpmath.besselk(0, x)) / (2 * mpmath.pi * p ** 2)
        area = 2 * mpmath.pi ** (n / 2) / mpmath.gamma(n / 2)
        return r ** (2 - n) / ((n - 2) * area) + (p / (2 * mpmath.pi * r)) ** (-nu) * mpmath.besselk(nu, x)
    if family == "BergerGen":
        return 1 + (p / (2 * mpmath.pi * r)) ** (-nu) * mpmath.besseli(nu, x)
    if family == "ConvDiffGen":
        return p ** (n - 0.5) / (2 * mpmath.pi) * (2 * mpmath.pi * x) ** (-nu) * mpmath.besseli(nu, x)
    raise AssertionError(family)


VALID = [(f.value, n) for f in Family for n in (1.5, 2.0, 2.5, 3.0, 4.0, 5.0)
         if n >= 2 or f in (Family.E_DECAY, Family.E_OSC, Family.HFJ)]


@pytest.mark.parametrize("family,n", VALID)
def test_kernels_against_mpmath(family, n):
    for p in (0.5, 1.3, 3.0):
        for r in (0.05, 0.4, 1.0, 2.7, 6.0):
            got = complex(kernels.radial(family, n, p, np.array(r)))
            want = complex(_mp_general(family, n, p, r))
            assert abs(got - want) <= 1e-10 * abs(want), (p, r)


def test_eq_fractional_negative_order_branch():
    # 1 < n < 2 uses order in (-1/2, 0)
    for r in (0.1, 1.0, 5.0):
        got = kernels.eval_E_decay(1.4, 1.1, r)
        assert got == pytest.approx(float(_mp_general("EDecay", 1.4, 1.1, r)), rel=1e-10)


def test_limits_at_zero():
    for n in (1.5, 2.0, 3.0, 4.5):
        lim = kernels.eval_phi_J(n, 1.7, 0.0)
        assert lim == pytest.approx(kernels.eval_phi_J(n, 1.7, 1e-9), rel=1e-12)
    w = kernels.eval_plate_kernel(Family.WINKLER_GEN, 2, 1.3, 0.0)
    assert (w.re, w.im) == (1.0, 0.0)
    assert kernels.eval_convdiff_gen(3, 1.2, (0.5, 0.1), 1.0, (0.0, 0.0)) == pytest.approx(
        kernels.eval_convdiff_gen(3, 1.2, (0.5, 0.1), 1.0, (1e-9, 0.0)), rel=1e-8)
    assert kernels.eval_plate_kernel(Family.BERGER_GEN, 3, 1.0, 0.0).re == 1.0


def test_berger_fund_n2_formula():
    a, r = 1.7, 0.6
    want = -(math.log(r) + float(mpmath.besselk(0, a * r))) / (2 * math.pi * a * a)
    got = kernels.eval_plate_kernel(Family.BERGER_FUND, 2, a, r)
    assert got.re == pytest.approx(want, rel=1e-12) and got.im == 0.0


def test_berger_fund_n2_has_finite_limit():
    # ln r + K_0(alpha r) -> -ln(alpha/2) - gamma; the n = 2 kernel does not diverge
    a = 2.0
    lim = -(-math.log(a / 2) - 0.5772156649015329) / (2 * math.pi * a * a)
    assert kernels.eval_plate_kernel(Family.BERGER_FUND, 2, a, 1e-7).re == pytest.approx(lim, rel=1e-6)


@pytest.mark.parametrize("family", [Family.E_DECAY, Family.E_OSC, Family.WINKLER_FUND, Family.BERGER_FUND])
def test_singular_families_raise_at_zero(family):
    assert kernels.is_singular(family, 3)
    with pytest.raises(SingularityError):
        kernels.radial(family, 3, 1.0, np.array([0.0, 1.0]))
    spec = KernelSpec(family, 3)
    with pytest.raises(SingularityError):
        spec.matrix([[0.0, 0.0]], [[0.0, 0.0]])


def test_radial_invariance_under_rotation():
    rng = np.random.default_rng(3)
    spec = KernelSpec(Family.HFJ, 2.5, 1.4)
    for _ in range(100):
        c = rng.normal(size=2)
        d = rng.normal(size=2)
        t = rng.uniform(0, 2 * math.pi)
        rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        a = spec.matrix([c + d], [c])[0, 0]
        b = spec.matrix([c + rot @ d], [c])[0, 0]
        assert abs(a - b) <= 1e-12 * abs(a)


def test_continuity_in_fractional_n():
    r = np.array([0.3, 1.0, 3.0])
    for fam in (Family.HFJ, Family.E_DECAY, Family.BERGER_GEN, Family.WINKLER_GEN):
        a = kernels.radial(fam, 2.5, 1.2, r)
        b = kernels.radial(fam, 2.5 + 1e-6, 1.2, r)
        assert np.all(np.abs(a - b) < 1e-3 * np.abs(a))


def test_convdiff_radial_symmetry_at_zero_drift():
    v = (0.0, 0.0)
    a = kernels.eval_convdiff_gen(2.5, 1.1, v, 2.0, (0.6, 0.8))
    b = kernels.eval_convdiff_gen(2.5, 1.1, v, 2.0, (-1.0, 0.0))
    assert a == b


def test_tau_from_drift():
    assert kernels.tau_from_drift((0.0, 0.0), 2.0, 8.0) == 2.0
    assert kernels.tau_from_drift((3.0, 4.0), 0.5, 1.0) == pytest.approx(math.sqrt(25 / 1.0 + 2.0))
    with pytest.raises(DomainError):
        kernels.tau_from_drift((0.0, 0.0), 1.0, 0.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        KernelSpec(Family.WINKLER_GEN, 6)
    with pytest.raises(DomainError):
        KernelSpec(Family.HFJ, 0.5)
    with pytest.raises(DomainError):
        KernelSpec(Family.HFJ, 2, scale=0)
    with pytest.raises(DomainError):
        KernelSpec(Family.CONVDIFF_GEN, 2)
    with pytest.raises(DomainError):
        KernelSpec(Family.HFJ, 2, drift=Drift((1, 0), 1))
    with pytest.raises(ValueError):
        KernelSpec("Gaussian", 2)


def test_spec_round_trip_and_norm():
    s = KernelSpec(Family.CONVDIFF_GEN, 2.5, 0.7, Drift((1.0, -0.5), 0.3), norm=2.0)
    assert KernelSpec.from_dict(s.to_dict()) == s
    base = KernelSpec(Family.HFJ, 3, 1.1)
    r = np.array([0.5, 1.5])
    assert np.array_equal(KernelSpec(Family.HFJ, 3, 1.1, norm=2.0).radial(r), 2.0 * base.radial(r))


def test_matrix_includes_drift_factor():
    s = KernelSpec(Family.CONVDIFF_GEN, 2, 1.0, Drift((1.0, 0.0), 0.5))
    P = np.array([[1.0, 0.0]])
    C = np.array([[0.0, 0.0]])
    want = kernels.eval_convdiff_gen(2, 1.0, (1.0, 0.0), 0.5, (1.0, 0.0))
    assert s.matrix(P, C)[0, 0] == pytest.approx(want, rel=1e-15)
    assert s.matrix(P, C)[0, 0] == pytest.approx(math.exp(-1.0) * s.radial(np.array(1.0)), rel=1e-14)


def test_plate_kernel_rejects_non_plate():
    with pytest.raises(DomainError):
        kernels.eval_plate_kernel(Family.HFJ, 2, 1.0, 1.0)


def test_complex_value():
    z = ComplexValue.of(1 + 2j)
    assert complex(z) == 1 + 2j
    with pytest.raises(DomainError):
        ComplexValue(float("nan"), 0.0)
