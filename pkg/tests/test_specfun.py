import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyext import specfun as sf
from hardyext.errors import DomainError, PoleError

mp.mp.dps = 30

finite = dict(allow_nan=False, allow_infinity=False)
nonpole_real = st.floats(-60, 60, **finite).filter(lambda x: x > 0.5 or abs(x - round(x)) > 1e-6)


# --- digamma family -----------------------------------------------------------

def test_digamma_at_one():
    assert sf.digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-15)


def test_digamma_at_i():
    v = complex(sf.digamma(1j))
    assert v.real == pytest.approx(0.0946503206224767, abs=1e-13)
    assert v.imag == pytest.approx(sf.K, abs=1e-13)


def test_trigamma_values():
    assert sf.trigamma(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert sf.trigamma(0.5) == pytest.approx(math.pi**2 / 2, rel=1e-14)


def test_trigamma_half_brute_force():
    k = np.arange(10**7, dtype=float)
    brute = float(np.sum(1.0 / (k + 0.5) ** 2)) + 1.0 / (10**7)  # tail ~ 1/N
    assert sf.trigamma(0.5) == pytest.approx(brute, abs=1e-12)


def test_tetragamma_at_one():
    assert sf.tetragamma(1.0) == pytest.approx(-2 * 1.2020569031595942, rel=1e-14)


def test_poles_raise():
    for z in (0.0, -1.0, -7.0, -3.0 + 1e-10):
        with pytest.raises(PoleError):
            sf.digamma(z)
        with pytest.raises(PoleError):
            sf.trigamma(z)
    with pytest.raises(ZeroDivisionError):
        sf.digamma(-2.0)


def test_pole_guard_can_be_disabled():
    assert math.isfinite(sf.digamma(-3.0 + 1e-10, pole_tol=0.0))


@settings(max_examples=200, deadline=None)
@given(nonpole_real)
def test_digamma_real_vs_mpmath(x):
    ref = float(mp.digamma(x))
    assert abs(sf.digamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=200, deadline=None)
@given(st.floats(-40, 40, **finite), st.floats(-40, 40, **finite).filter(lambda y: abs(y) > 1e-3))
def test_digamma_complex_vs_mpmath(x, y):
    z = complex(x, y)
    ref = complex(mp.digamma(z))
    assert abs(sf.digamma(z) - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=150, deadline=None)
@given(nonpole_real)
def test_trigamma_tetragamma_vs_mpmath(x):
    r1 = float(mp.psi(1, x))
    r2 = float(mp.psi(2, x))
    assert abs(sf.trigamma(x) - r1) <= 1e-11 * max(1.0, abs(r1))
    assert abs(sf.tetragamma(x) - r2) <= 1e-10 * max(1.0, abs(r2))


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False).filter(lambda z: abs(z.imag) > 1e-3))
def test_digamma_conjugate_symmetry(z):
    assert abs(sf.digamma(z.conjugate()) - complex(sf.digamma(z)).conjugate()) < 1e-12


@settings(max_examples=100, deadline=None)
@given(nonpole_real.filter(lambda x: abs(x) > 1e-3 and (x > 0.5 or abs(x - round(x)) > 1e-3)))
def test_digamma_recurrence(x):
    assert abs(sf.digamma(x + 1) - sf.digamma(x) - 1 / x) < 1e-10 * max(1, abs(1 / x))


@pytest.mark.parametrize("n", range(6))
def test_residue_minus_one(n):
    eps = 1e-6
    assert (eps) * sf.digamma(-n + eps) == pytest.approx(-1.0, abs=1e-5)


def test_large_negative_reflection():
    x = -1234.3
    assert sf.digamma(x) == pytest.approx(float(mp.digamma(x)), rel=1e-12)
    assert sf.trigamma(x) == pytest.approx(float(mp.psi(1, x)), rel=1e-10)


# --- named constants -----------------------------------------------------------

def test_constants_quadruple():
    n = np.arange(2_000_000, dtype=float)
    brute = float(np.sum(1.0 / (1.0 + n * n))) + 1.0 / 2_000_000
    vals = [sf.K, complex(sf.digamma(1j)).imag, brute, sf.re_Z_closed(0.0)]
    assert max(vals) - min(vals) < 1e-10


def test_gamma0_value():
    assert sf.CONSTANTS.gamma0 == pytest.approx(1.3437319710, abs=1e-9)


# --- Hurwitz kernel ---------------------------------------------------------------

def _Z_ref(x):
    z = mp.expjpi(2 * mp.mpf(x))
    return complex((mp.lerchphi(z, 1, -1j) - mp.lerchphi(z, 1, 1j)) / (2j)) if x % 1 else complex(sf.K)


def test_Z_at_zero():
    assert sf.hurwitz_Z(0.0) == pytest.approx(complex(sf.K, 0.0), abs=1e-15)


def test_Z_real_at_half():
    assert abs(sf.hurwitz_Z(0.5).imag) < 1e-13


def test_re_Z_closed_examples():
    assert sf.re_Z_closed(0.5) == pytest.approx(math.pi / (2 * math.sinh(math.pi)) + 0.5, rel=1e-15)
    assert sf.re_Z_closed(1.25) == pytest.approx(sf.re_Z_closed(0.25), rel=1e-15)
    expect = 0.5 * math.pi * math.cosh(2 * math.pi * (0.25 - 0.5)) / math.sinh(math.pi) + 0.5
    assert sf.hurwitz_Z(0.25).real == pytest.approx(expect, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3, **finite).filter(lambda x: abs(x - round(x)) > 1e-12))
def test_Z_vs_lerch_oracle(x):
    assert abs(sf.hurwitz_Z(x) - _Z_ref(x)) < 1e-12


@pytest.mark.parametrize("x", [1e-13, 1e-9, 1e-5, 1 - 1e-10, -1e-11])
def test_Z_near_integers(x):
    assert abs(sf.hurwitz_Z(x) - _Z_ref(x)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5, **finite))
def test_Z_hermitian_and_periodic(x):
    z = sf.hurwitz_Z(x)
    assert abs(z - complex(sf.hurwitz_Z(-x)).conjugate()) < 1e-12
    assert abs(z - sf.hurwitz_Z(x + 1.0)) < 1e-11


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_Z_positive_definite(seed):
    r = np.random.default_rng(seed)
    pts = r.uniform(-3, 3, 20)
    phi = r.normal(size=20) + 1j * r.normal(size=20)
    Zm = sf.hurwitz_Z_array(pts[:, None] - pts[None, :])
    assert np.vdot(phi, Zm @ phi).real >= -1e-10


def test_hurwitz_Z_array_shape():
    xs = np.linspace(0, 1, 6).reshape(2, 3)
    out = sf.hurwitz_Z_array(xs)
    assert out.shape == (2, 3)
    assert out[1, 2] == pytest.approx(sf.hurwitz_Z(1.0))


# --- logarithmic integral and periodization --------------------------------------

def test_log_integral_values():
    assert sf.log_integral(2.0) == pytest.approx(1.0451637801174927, abs=1e-12)
    assert abs(sf.log_integral(1e-300)) < 1e-2
    assert sf.log_integral(1e-300) < 0


@pytest.mark.parametrize("x", [0.3, 0.9, 2.0, math.exp(2 * math.pi * 0.1), 10.0, 100.0])
def test_log_integral_methods_agree(x):
    a = sf.log_integral(x)
    b = sf.log_integral(x, method="quadrature")
    assert a == pytest.approx(float(mp.li(x)), abs=1e-12, rel=1e-12)
    assert b == pytest.approx(a, abs=1e-8, rel=1e-8)


def test_log_integral_domain():
    for x in (1.0, 0.0, -2.0):
        with pytest.raises(DomainError):
            sf.log_integral(x)


def test_periodization_examples():
    assert abs(sf.im_Z_via_periodization(0.0)) < 1e-12
    assert abs(sf.im_Z_via_periodization(0.5)) < 1e-4
    n = np.arange(1, 10**6)
    direct = float(np.sum(np.sin(2 * np.pi * n * 0.25) / (1 + n * n)))
    assert sf.im_Z_via_periodization(0.25, n_wrap=20) == pytest.approx(direct, abs=1e-4)


def test_periodization_tail_correction_helps():
    exact = sf.hurwitz_Z(0.2).imag
    with_tail = abs(sf.im_Z_via_periodization(0.2, 20) - exact)
    without = abs(sf.im_Z_via_periodization(0.2, 20, tail_correction=False) - exact)
    assert with_tail <= without


# --- zeta1 and Lerch -------------------------------------------------------------

def test_zeta1_examples():
    assert sf.zeta1(0.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert sf.zeta1(1.0) == pytest.approx(math.pi**2 / 6 - 1, rel=1e-14)
    assert sf.zeta1(0.5) == pytest.approx(math.pi**2 / 2 - 4, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.9, 5, **finite))
def test_zeta1_is_shifted_trigamma(phi):
    assert abs(sf.zeta1(phi) - sf.trigamma(phi + 1)) < 1e-10


def test_lerch_examples():
    assert sf.lerch_phi(0.5, 1, 1) == pytest.approx(2 * math.log(2), rel=1e-13)
    assert sf.lerch_phi(0.0, 2, 3.0) == pytest.approx(1 / 9, rel=1e-15)
    assert sf.lerch_phi(1e-40, 1, 2.5 + 1j) == pytest.approx(1 / (2.5 + 1j), rel=1e-15)
    k = np.arange(200)
    brute = np.sum(0.3**k / (k - 1j))
    assert abs(sf.lerch_phi(0.3, 1, -1j) - brute) < 1e-13


@settings(max_examples=60, deadline=None)
# mpmath's lerchphi loses accuracy for |z| far below 1e-6, so the oracle range starts there
@given(st.floats(1e-6, 0.97, **finite), st.floats(0, 2 * math.pi, **finite), st.sampled_from([1j, -1j, 0.5, 2.5 + 1j]))
def test_lerch_vs_mpmath(rad, ang, v):
    z = rad * complex(math.cos(ang), math.sin(ang))
    ref = complex(mp.lerchphi(z, 1, v))
    assert abs(sf.lerch_phi(z, 1, v) - ref) < 1e-11 * max(1, abs(ref))
    arr = sf.lerch_phi_array(np.array([z, 0.5 * z]), 1, v)
    assert abs(arr[0] - ref) < 1e-11 * max(1, abs(ref))


def test_series_control_validation():
    with pytest.raises(ValueError):
        sf.SeriesControl(max_terms=3)
    with pytest.raises(ValueError):
        sf.SeriesControl(rel_tol=0.0)
