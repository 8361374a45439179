"""Spectral data for the one-parameter family of selfadjoint extensions
of the diagonal operator restricted to sequences with vanishing sum.

The extension with parameter theta in (-pi, pi] has pure point spectrum
given by the roots of G(lambda) = K tan(theta/2), one root below zero and
one in each interval (n-1, n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy import optimize, special

from .errors import BracketError, DomainError, PoleError, RadiusError
from .specfun import CONSTANTS, K, digamma, tetragamma, trigamma

EDGE_EPS = 1e-12
PI_SNAP = 1e-12
NEG_LIMIT = 1e300


@dataclass(frozen=True)
class ExtensionParameter:
    """Angle theta of the boundary condition; zeta = exp(i theta).

    -pi is identified with pi, and angles within 1e-12 of pi snap to pi.
    """

    theta: float

    def __post_init__(self):
        t = float(self.theta)
        if not math.isfinite(t) or t <= -math.pi - PI_SNAP or t > math.pi + PI_SNAP:
            raise DomainError(f"theta={t!r} is outside (-pi, pi]")
        if abs(t - math.pi) <= PI_SNAP or abs(t + math.pi) <= PI_SNAP:
            t = math.pi
        object.__setattr__(self, "theta", t)

    @property
    def zeta(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def is_free(self) -> bool:
        """True for theta = pi, where the extension is the diagonal operator itself."""
        return self.theta == math.pi

    @property
    def level(self) -> float:
        """Right-hand side K tan(theta/2) of the eigenvalue equation."""
        if self.is_free:
            return math.inf
        return K * math.tan(0.5 * self.theta)


def _param(theta) -> ExtensionParameter:
    return theta if isinstance(theta, ExtensionParameter) else ExtensionParameter(theta)


def G(lam: float, pole_tol: float = 1e-8) -> float:
    """Re psi(i) - psi(-lambda)."""
    return CONSTANTS.re_psi_i - digamma(-lam, pole_tol)


def G_prime(lam: float, pole_tol: float = 1e-8) -> float:
    return trigamma(-lam, pole_tol)


def G_second(lam: float, pole_tol: float = 1e-8) -> float:
    return -tetragamma(-lam, pole_tol)


def G_complex(z: complex) -> complex:
    return CONSTANTS.re_psi_i - digamma(-complex(z))


def G_prime_complex(z: complex) -> complex:
    return trigamma(-complex(z))


def G_series(lam: float, n_terms: int = 200000) -> float:
    """Raw series sum (1 + lam k)/((k - lam)(1 + k^2)) with an asymptotic tail.

    The tail uses Hurwitz zeta values of the first three inverse powers.
    """
    if lam >= 0 and abs(lam - round(lam)) < 1e-8:
        raise PoleError(f"lambda={lam!r} is a pole")
    k = np.arange(n_terms, dtype=float)
    head = np.sum((1.0 + lam * k) / ((k - lam) * (1.0 + k * k)))
    # (1 + lam k)/((k - lam)(1 + k^2)) = lam/k^2 + (lam^2 + 1)/k^3 + lam^3/k^4 + ...
    q = float(n_terms)
    c2 = lam
    c3 = lam * lam + 1.0
    c4 = lam**3
    tail = c2 * special.zeta(2.0, q) + c3 * special.zeta(3.0, q) + c4 * special.zeta(4.0, q)
    return float(head + tail)


def _solve_in(f, lo: float, hi: float, v: float) -> float:
    flo, fhi = f(lo), f(hi)
    if not (flo < 0.0 < fhi):
        raise BracketError(f"no sign change on ({lo!r}, {hi!r}) for level {v!r}")
    return optimize.brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def eigenvalue(theta, n: int) -> float:
    """The n-th eigenvalue: negative for n = 0, inside (n-1, n) otherwise."""
    p = _param(theta)
    if n < 0:
        raise DomainError("n must be nonnegative")
    if p.is_free:
        return float(n)
    v = p.level
    f = lambda lam: G(lam, 0.0) - v
    if n >= 1:
        return _solve_in(f, n - 1 + EDGE_EPS * max(1, n), n - EDGE_EPS * max(1, n), v)
    hi = -EDGE_EPS
    lo = -2.0
    while f(lo) >= 0.0:
        lo *= 2.0
        if -lo > NEG_LIMIT:
            raise BracketError(f"lowest eigenvalue lies below -1e300 for theta={p.theta!r}")
    return _solve_in(f, lo, hi, v)


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    lam: float
    lo: float
    hi: float
    residual: float


@dataclass
class SpectrumTable:
    theta: ExtensionParameter
    entries: List[SpectrumEntry] = field(default_factory=list)
    residual_bound: float = 0.0

    @property
    def values(self) -> np.ndarray:
        return np.array([e.lam for e in self.entries])


def _bracket(n: int) -> Tuple[float, float]:
    return (-math.inf, 0.0) if n == 0 else (float(n - 1), float(n))


def spectrum(theta, n_max: int) -> SpectrumTable:
    """Eigenvalues for n = 0..n_max with their cells and residuals |G - level|.

    Within about 0.006 of -pi the lowest eigenvalue lies below -1e300; its
    entry then holds -inf with a NaN residual.
    """
    p = _param(theta)
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    table = SpectrumTable(theta=p)
    worst = 0.0
    for n in range(n_max + 1):
        try:
            lam = eigenvalue(p, n)
        except BracketError:
            if n != 0:
                raise
            # level below G(-1e300): the lowest root is not representable
            table.entries.append(SpectrumEntry(0, -math.inf, -math.inf, 0.0, math.nan))
            continue
        if p.is_free:
            lo, hi, res = n - 0.5, n + 0.5, 0.0
        else:
            lo, hi = _bracket(n)
            res = abs(G(lam, 0.0) - p.level)
        worst = max(worst, res)
        table.entries.append(SpectrumEntry(n, lam, lo, hi, res))
    table.residual_bound = worst
    return table


@dataclass
class EigenvectorFamily:
    theta: ExtensionParameter
    n: int
    lam: float
    coefficients: np.ndarray
    N_trunc: int
    tail_norm_sq: float

    @property
    def norm_sq(self) -> float:
        """Truncated squared norm plus the estimated tail."""
        return float(np.sum(np.abs(self.coefficients) ** 2) + self.tail_norm_sq)


def eigenvector(theta, n: int, N_trunc: int = 100000) -> EigenvectorFamily:
    """Coefficients lambda_n/(k - lambda_n), k = 0..N_trunc-1."""
    p = _param(theta)
    if N_trunc < 10:
        raise DomainError("N_trunc must be at least 10")
    lam = eigenvalue(p, n)
    k = np.arange(N_trunc, dtype=float)
    if p.is_free:
        coeff = np.zeros(N_trunc)
        if n < N_trunc:
            coeff[n] = 1.0
        return EigenvectorFamily(p, n, lam, coeff, N_trunc, 0.0)
    coeff = lam / (k - lam)
    # Euler-Maclaurin midpoint estimate of sum_{k >= N} lam^2/(k - lam)^2
    tail = lam * lam / (N_trunc - 0.5 - lam)
    return EigenvectorFamily(p, n, lam, coeff, N_trunc, tail)


def eigenvector_norm_sq(lam: float) -> float:
    """Closed form lambda^2 psi'(-lambda) of the full squared norm."""
    return lam * lam * trigamma(-lam, 0.0)


def inner_product_tail_bound(lam_n: float, lam_m: float, N_trunc: int) -> float:
    """Bound on the dropped part of sum lam_n lam_m /((k-lam_n)(k-lam_m))."""
    return abs(lam_n * lam_m) / (N_trunc - 1 - max(lam_n, lam_m, 0.0))


def eigen_residual(theta, n: int, N_trunc: int = 100000) -> Tuple[float, float]:
    """Check the eigen-relation coordinatewise on a truncation.

    The eigenvector is split as g + c (x_+ + zeta x_-), with c = lam/(1+zeta).
    Returns (max coordinate residual of (H g + c(i x_+ - i zeta x_-)) - lam y,
    |sum g_k|), the second being the domain defect of g (tail added).
    """
    p = _param(theta)
    if p.is_free:
        return 0.0, 0.0
    lam = eigenvalue(p, n)
    zeta = p.zeta
    k = np.arange(N_trunc, dtype=float)
    y = lam / (k - lam)
    xp = 1.0 / (k - 1j)
    xm = 1.0 / (k + 1j)
    c = lam / (1.0 + zeta)
    g = y - c * (xp + zeta * xm)
    image = k * g + c * (1j * xp - 1j * zeta * xm)
    resid = float(np.max(np.abs(image - lam * y)))
    # g_k ~ a/k^2 with a = lam^2 + ... ; estimate tail from the last coefficient
    tail = g[-1] * (N_trunc - 1) ** 2 / N_trunc
    return resid, float(abs(np.sum(g) + tail))


def eigenvalue_raw_F(theta, lam: float, method: str = "closed", n_terms: int = 100000) -> complex:
    """Complex function whose zeros are the eigenvalues for zeta = exp(i theta).

    ``closed`` uses (1 + zeta) G(lam) - i (1 - zeta) K; ``series`` sums the
    defining series directly with an asymptotic tail.
    """
    p = _param(theta)
    if lam >= 0 and abs(lam - round(lam)) < 1e-8:
        raise PoleError(f"lambda={lam!r} is a pole")
    zeta = p.zeta
    if method == "closed":
        return (1 + zeta) * G(lam) - 1j * (1 - zeta) * K
    if method != "series":
        raise ValueError(f"unknown method {method!r}")
    k = np.arange(n_terms, dtype=float)
    num = lam * (1 + zeta) * k + 1j * lam * (1 - zeta) + (1 + zeta) - 1j * (1 - zeta) * k
    head = np.sum(num / ((k - lam) * (1 + k * k)))
    a = lam * (1 + zeta) - 1j * (1 - zeta)
    b = 1j * lam * (1 - zeta) + (1 + zeta)
    q = float(n_terms)
    tail = a * special.zeta(2.0, q) + (a * lam + b) * special.zeta(3.0, q) + (a * (lam * lam - 1) + b * lam) * special.zeta(4.0, q)
    return complex(head + tail)


def eigenvalue_split_F(theta, lam: float) -> complex:
    """Real/imaginary split of the same function using cos/sin of theta."""
    p = _param(theta)
    g = G(lam)
    c, s = math.cos(p.theta), math.sin(p.theta)
    return complex((1 + c) * g - s * K, (c - 1) * K + s * g)


def asymptotic_lambda(theta, n: int) -> float:
    """Second-order expansion of lambda_n near theta = +pi or -pi.

    With x = cot(theta/2)/K the eigenvalue attached to the pole m is
    m - x + (H_m - gamma0/2) x^2, H_m the m-th harmonic number. Near +pi
    the pole is m = n; near -pi it is m = n - 1 (n >= 1).
    """
    p = _param(theta)
    t = p.theta
    if p.is_free:
        return float(n)
    if t > 0 and math.pi - t <= 0.2:
        m = n
    elif t < 0 and t + math.pi <= 0.2:
        if n < 1:
            raise DomainError("the lowest eigenvalue diverges near -pi")
        m = n - 1
    else:
        raise DomainError("asymptotic expansion is only valid within 0.2 of +-pi")
    x = 1.0 / (K * math.tan(0.5 * t))
    harmonic = sum(1.0 / k for k in range(1, m + 1))
    return m - x + (harmonic - 0.5 * CONSTANTS.gamma0) * x * x


def _circle(n: int, r: float, quad_points: int):
    phi = 2.0 * np.pi * np.arange(quad_points) / quad_points
    w = np.exp(1j * phi)
    return (n - 0.5) + r * w, w


def contour_counts(theta, n: int, r: float = 0.75, quad_points: int = 512) -> float:
    """Winding number (zeros minus poles) of G - v around the circle."""
    p = _param(theta)
    if p.is_free:
        raise DomainError("contour formula needs a finite level")
    v = p.level
    z, w = _circle(n, r, quad_points)
    vals = np.array([G_prime_complex(zz) / (G_complex(zz) - v) for zz in z])
    return float((r / quad_points * np.sum(vals * w)).real)


def _auto_radius(v: float, n: int) -> float:
    # G increases on each cell, so the circle excludes the neighbouring roots
    # exactly when G(left crossing) > v > G(right crossing). Among such radii
    # keep the circle farthest from roots (Newton distance) and poles.
    grid = np.concatenate([0.5 + np.geomspace(1e-4, 0.02, 12), np.linspace(0.53, 0.98, 46)])
    best_r, best_score = 0.75, -np.inf
    for r in grid:
        left, right = n - 0.5 - r, n - 0.5 + r
        score = min(
            (G(left, 0.0) - v) / G_prime(left, 0.0),
            (v - G(right, 0.0)) / G_prime(right, 0.0),
            r - 0.5,
            1.5 - r,
        )
        if score > best_score:
            best_r, best_score = float(r), score
    return best_r


def _contour_sum(v: float, n: int, r: float, quad_points: int) -> float:
    z, w = _circle(n, r, quad_points)
    vals = np.array([zz * G_prime_complex(zz) / (G_complex(zz) - v) for zz in z])
    return float((r / quad_points * np.sum(vals * w)).real)


def contour_eigenvalue(
    theta, n: int, quad_points: int = 512, r: float | None = None, max_points: int = 16384
) -> float:
    """Eigenvalue from the argument principle: (2n-1) + (1/2 pi i) oint z G'/(G - v).

    The circle is centred at n - 1/2 and encloses the poles n-1 and n plus,
    for a suitable radius in (1/2, 1), exactly one root. ``r=None`` picks the
    radius keeping the circle farthest from neighbouring roots and poles.
    The point count starts at ``quad_points`` and doubles (up to
    ``max_points``) until two successive estimates agree to 1e-12.
    """
    p = _param(theta)
    if p.is_free:
        raise DomainError("theta = pi has no finite level")
    if n < 1:
        raise DomainError("contour formula applies to n >= 1")
    v = p.level
    if r is None:
        r = _auto_radius(v, n)
    if not 0.5 < r < 1.0:
        raise RadiusError(f"radius {r!r} must lie in (1/2, 1)")
    m = quad_points
    count = contour_counts(p, n, r, m)
    if abs(count + 1.0) > 1e-6 and m < max_points:
        count = contour_counts(p, n, r, max_points)
    if abs(count + 1.0) > 1e-6:
        raise RadiusError(f"circle encloses {count + 2:.3f} zeros instead of one")
    prev = _contour_sum(v, n, r, m)
    while m < max_points:
        m *= 2
        cur = _contour_sum(v, n, r, m)
        if abs(cur - prev) <= 1e-12 * max(1.0, abs(cur)):
            prev = cur
            break
        prev = cur
    return (2 * n - 1) + prev


@dataclass(frozen=True)
class DefectVectors:
    x_plus: np.ndarray
    x_minus: np.ndarray
    y2: np.ndarray
    y3: np.ndarray


def defect_vectors(N_trunc: int) -> DefectVectors:
    k = np.arange(N_trunc, dtype=float)
    return DefectVectors(1.0 / (k - 1j), 1.0 / (k + 1j), 1.0 / (1 + k * k), k / (1 + k * k))


def boundary_form(f_plus_coeff: complex, f_minus_coeff: complex) -> float:
    """||f_+||^2 - ||f_-||^2 for f_+ = c_+ x_+, f_- = c_- x_-."""
    return (abs(f_plus_coeff) ** 2 - abs(f_minus_coeff) ** 2) * K
