"""Special functions: digamma and its derivatives, the Hurwitz kernel Z,
the shifted trigamma zeta1, the logarithmic integral and a Lerch series.

The digamma family uses the upward recurrence followed by the Stirling
asymptotic series, so complex arguments are supported throughout.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError, DomainError, PoleError, QuadratureError

Number = Union[float, complex]

POLE_TOL = 1e-8
_SHIFT = 12.0

# Bernoulli numbers B_2, B_4, ..., B_16
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for slowly convergent series and quadratures."""

    max_terms: int = 10**6
    rel_tol: float = 1e-12
    abs_tol: float = 1e-13

    def __post_init__(self):
        if self.max_terms < 16:
            raise ValueError("max_terms must be at least 16")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_CONTROL = SeriesControl()


def _is_real(z) -> bool:
    return isinstance(z, (int, float, np.integer, np.floating))


def _check_pole(z: Number, pole_tol: float) -> None:
    if pole_tol <= 0:
        return
    re = z.real
    im = z.imag if not _is_real(z) else 0.0
    if re < 0.5 and abs(im) < pole_tol:
        if abs(re - round(re)) < pole_tol:
            raise PoleError(f"argument {z!r} is within {pole_tol:g} of a pole")


def digamma(z: Number, pole_tol: float = POLE_TOL) -> Number:
    """Logarithmic derivative of the gamma function.

    Real input returns a float, complex input a complex. ``pole_tol=0``
    disables the pole guard (used by root finders that approach poles
    deliberately).
    """
    _check_pole(z, pole_tol)
    real = _is_real(z)
    if real:
        x = float(z)
        if x < -1000.0:
            return digamma(1.0 - x, 0) - math.pi / math.tan(math.pi * x)
        acc = 0.0
        while x < _SHIFT:
            acc -= 1.0 / x
            x += 1.0
        inv2 = 1.0 / (x * x)
        series = 0.0
        p = inv2
        for k, b in enumerate(_BERNOULLI, start=1):
            series += b / (2 * k) * p
            p *= inv2
        return acc + math.log(x) - 0.5 / x - series
    w = complex(z)
    if w.real < -1000.0:
        return digamma(1.0 - w, 0) - math.pi / cmath.tan(math.pi * w)
    acc = 0j
    while w.real < _SHIFT:
        acc -= 1.0 / w
        w += 1.0
    inv2 = 1.0 / (w * w)
    series = 0j
    p = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * p
        p *= inv2
    return acc + cmath.log(w) - 0.5 / w - series


def trigamma(z: Number, pole_tol: float = POLE_TOL) -> Number:
    """Derivative of digamma: sum over k >= 0 of 1/(z+k)^2."""
    _check_pole(z, pole_tol)
    w = float(z) if _is_real(z) else complex(z)
    if w.real < -1000.0:
        # reflection: psi'(1-z) + psi'(z) = pi^2 / sin^2(pi z)
        s = math.sin(math.pi * w) if _is_real(z) else cmath.sin(math.pi * w)
        return (math.pi / s) ** 2 - trigamma(1.0 - w, 0)
    acc = 0.0 * w
    while w.real < _SHIFT:
        acc += 1.0 / (w * w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0.0 * w
    p = inv2 * inv
    for b in _BERNOULLI:
        series += b * p
        p *= inv2
    return acc + inv + 0.5 * inv2 + series


def tetragamma(z: Number, pole_tol: float = POLE_TOL) -> Number:
    """Second derivative of digamma: -2 times the sum of 1/(z+k)^3."""
    _check_pole(z, pole_tol)
    w = float(z) if _is_real(z) else complex(z)
    if w.real < -1000.0:
        raise DomainError("tetragamma is implemented for Re z >= -1000")
    acc = 0.0 * w
    while w.real < _SHIFT:
        acc -= 2.0 / (w * w * w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0.0 * w
    p = inv2 * inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += (2 * k + 1) * b * p
        p *= inv2
    return acc - inv2 - inv2 * inv - series


@dataclass(frozen=True)
class NamedConstants:
    K: float
    gamma_euler: float
    gamma0: float
    re_psi_i: float


def _named_constants() -> NamedConstants:
    psi_i = digamma(1j)
    euler = float(np.euler_gamma)
    k_val = 0.5 * (1.0 + math.pi / math.tanh(math.pi))
    return NamedConstants(
        K=k_val,
        gamma_euler=euler,
        gamma0=2.0 * euler + 2.0 * psi_i.real,
        re_psi_i=psi_i.real,
    )


CONSTANTS = _named_constants()
K = CONSTANTS.K


def re_Z_closed(x: float) -> float:
    """Real part of the Hurwitz kernel from its hyperbolic closed form."""
    t = float(x) - math.floor(float(x))
    return 0.5 * math.pi * math.cosh(2.0 * math.pi * (t - 0.5)) / math.sinh(math.pi) + 0.5


_SMALL_T = 1e-7


def _im_Z_small(t: float) -> float:
    # Clausen expansion of sum sin(n a)/n^2 plus the linear part of
    # sum sin(n a)/(n^2 (1+n^2)), a = 2 pi t; error below 1e-18 for t < 1e-7
    a = 2.0 * math.pi * t
    c = CONSTANTS.gamma_euler + CONSTANTS.re_psi_i
    return a - a * math.log(a) + a**3 / 72.0 - a * c


def _im_Z_integral(t: float, ctl: SeriesControl) -> float:
    # sum_{n>=1} sin(2 pi n t)/(1+n^2) written as a Laplace integral:
    # sin(2 pi t) * int_0^inf e^{-s} sin(s) / (1 - 2 e^{-s} cos(2 pi t) + e^{-2s}) ds
    s2 = math.sin(2.0 * math.pi * t)
    if s2 == 0.0:
        return 0.0
    if t < _SMALL_T:
        return _im_Z_small(t)
    if 1.0 - t < _SMALL_T:
        return -_im_Z_small(1.0 - t)
    sin_sq = 4.0 * math.sin(math.pi * t) ** 2

    def integrand(s):
        # denominator as (1 - q)^2 + 4 q sin^2(pi t), exact near s = 0
        q = math.exp(-s)
        return q * math.sin(s) / (math.expm1(-s) ** 2 + q * sin_sq)

    width = abs(2.0 * math.sin(math.pi * t))
    pts = [w for w in (width, 4.0 * width) if 0.0 < w < 1.0]
    head, err1 = integrate.quad(
        integrand, 0.0, 1.0, points=pts or None, epsabs=ctl.abs_tol, epsrel=ctl.rel_tol, limit=200
    )
    tail, err2 = integrate.quad(integrand, 1.0, 60.0, epsabs=ctl.abs_tol, epsrel=ctl.rel_tol, limit=200)
    if err1 + err2 > 1e3 * max(ctl.abs_tol, ctl.rel_tol * abs(head + tail)):
        raise QuadratureError(f"Im Z quadrature did not converge at x={t!r}")
    return s2 * (head + tail)


def hurwitz_Z(x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Z(x) = sum_{n>=0} e(nx)/(1+n^2), a 1-periodic complex function."""
    t = float(x) - math.floor(float(x))
    if t >= 1.0:  # x a tiny negative number rounds up to 1
        t = 0.0
    return complex(re_Z_closed(t), _im_Z_integral(t, ctl))


def hurwitz_Z_array(xs, ctl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
    return np.array([hurwitz_Z(float(x), ctl) for x in np.ravel(xs)]).reshape(np.shape(xs))


def _li_expi(x: float) -> float:
    return float(special.expi(math.log(x)))


def _li_quadrature(x: float) -> float:
    # In the variable u = ln t the integrand is e^u / u with a principal value at u = 0.
    a = math.log(x)
    f = lambda u: math.exp(u) / u

    def quad(lo, hi):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(f, lo, hi, epsabs=1e-15, epsrel=1e-13, limit=400)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(str(exc)) from exc
        if err > 1e-9 * max(1.0, abs(val)):
            raise QuadratureError(f"li quadrature error estimate {err:g} too large")
        return val

    if a < 0.0:
        return quad(-np.inf, a)

    def excised(eta):
        return quad(-np.inf, -eta) + quad(eta, a)

    eta = min(1e-3, a / 4.0)
    # The excised piece is 2*eta + O(eta^3); one Richardson step removes the linear term.
    return 2.0 * excised(eta / 2.0) - excised(eta)


def log_integral(x: float, method: str = "expi") -> float:
    """Principal-value logarithmic integral li(x) for x > 0, x != 1.

    ``method="expi"`` uses the exponential integral, li(x) = Ei(ln x);
    ``method="quadrature"`` integrates directly with symmetric excision
    around the singular point and a Richardson step.
    """
    x = float(x)
    if not x > 0.0 or x == 1.0:
        raise DomainError("li(x) requires x > 0 and x != 1")
    if method == "expi":
        return _li_expi(x)
    if method == "quadrature":
        return _li_quadrature(x)
    raise ValueError(f"unknown method {method!r}")


def sine_transform_kernel(y: float, method: str = "expi") -> float:
    """phi(y) = int_0^inf sin(2 pi lambda y)/(1+lambda^2) d lambda via li."""
    if y == 0.0:
        return 0.0
    a = 2.0 * math.pi * y
    if method == "expi":
        return 0.5 * (math.exp(-a) * float(special.expi(a)) - math.exp(a) * float(special.expi(-a)))
    return 0.5 * (
        math.exp(-a) * log_integral(math.exp(a), method) - math.exp(a) * log_integral(math.exp(-a), method)
    )


def _periodization_tail(x: float, n_wrap: int) -> float:
    # Omitted pairs phi(n+x) + phi(x-n), n > n_wrap, from phi(y) ~ 1/a + 2/a^3 + 24/a^5, a = 2 pi y.
    lo, hi = n_wrap + 1.0 - x, n_wrap + 1.0 + x
    two_pi = 2.0 * math.pi
    first = (digamma(lo) - digamma(hi)) / two_pi
    third = 2.0 / two_pi**3 * (special.zeta(3.0, hi) - special.zeta(3.0, lo))
    fifth = 24.0 / two_pi**5 * (special.zeta(5.0, hi) - special.zeta(5.0, lo))
    return first + third + fifth


def im_Z_via_periodization(
    x: float, n_wrap: int = 20, tail_correction: bool = True, method: str = "expi"
) -> float:
    """Symmetric partial periodization of phi, sum_{|n| <= n_wrap} phi(x+n).

    With ``tail_correction`` the omitted pairs are added from the
    asymptotic expansion of phi, which turns the O(1/n_wrap) truncation
    error into O(n_wrap**-7).
    """
    if n_wrap < 1:
        raise ValueError("n_wrap must be at least 1")
    t = float(x) - math.floor(float(x))
    if t > 0.5:
        t -= 1.0
    total = sum(sine_transform_kernel(t + n, method) for n in range(-n_wrap, n_wrap + 1))
    if tail_correction:
        total += _periodization_tail(t, n_wrap)
    return total


def zeta1(phi: float) -> float:
    """sum_{n>=1} 1/(phi+n)^2, i.e. trigamma(phi + 1)."""
    return trigamma(float(phi) + 1.0)


def lerch_phi(z: Number, s: float, v: Number, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Lerch transcendent sum_{k>=0} z^k / (k+v)^s by direct summation."""
    z = complex(z)
    v = complex(v)
    if abs(v.imag) < POLE_TOL and v.real < 0.5 and abs(v.real - round(v.real)) < POLE_TOL:
        raise PoleError(f"v={v!r} is a nonpositive integer")
    r = abs(z)
    if r > 1.0 + 1e-15:
        raise ConvergenceError("|z| > 1 is outside the series domain")
    if r >= 1.0 - 1e-15 and s <= 1.0:
        raise ConvergenceError("|z| = 1 requires s > 1")
    if r == 0.0:
        return v ** (-s)
    total = 0j
    chunk = 4096
    start = 0
    while start < ctl.max_terms:
        k = np.arange(start, min(start + chunk, ctl.max_terms), dtype=float)
        terms = z ** k / (k + v) ** s
        total += terms.sum()
        start += chunk
        n = float(start)
        if r < 1.0:
            # geometric tail bound once |n+v| >= 1
            bound = r**n / (1.0 - r) / max(abs(n + v) ** s, 1e-300)
        else:
            bound = 1.0 / ((s - 1.0) * max(n + v.real - 1.0, 1.0) ** (s - 1.0))
        if bound <= max(ctl.abs_tol, ctl.rel_tol * abs(total)):
            return complex(total)
    if r < 1.0:
        raise ConvergenceError("max_terms reached before the tail bound was met")
    return complex(total)


def lerch_phi_array(zs, s: float, v: Number, ctl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
    """Vectorised lerch_phi over z with max |z| < 1."""
    zs = np.asarray(zs, dtype=complex)
    v = complex(v)
    if abs(v.imag) < POLE_TOL and v.real < 0.5 and abs(v.real - round(v.real)) < POLE_TOL:
        raise PoleError(f"v={v!r} is a nonpositive integer")
    r = float(np.max(np.abs(zs))) if zs.size else 0.0
    if r >= 1.0:
        raise ConvergenceError("lerch_phi_array needs |z| < 1")
    flat = zs.ravel()
    total = np.zeros_like(flat)
    chunk = 256
    start = 0
    while start < ctl.max_terms:
        k = np.arange(start, start + chunk, dtype=float)
        total += (flat[:, None] ** k[None, :] / (k + v) ** s).sum(axis=1)
        start += chunk
        bound = r**start / (1.0 - r) / max(abs(start + v) ** s, 1e-300)
        if bound <= max(ctl.abs_tol, ctl.rel_tol * float(np.min(np.abs(total)) or 1.0)):
            return total.reshape(zs.shape)
    raise ConvergenceError("max_terms reached before the tail bound was met")
