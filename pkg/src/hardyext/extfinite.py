"""Finite boundary sets: Gram kernels, the isometry group, and extension spectra.

A boundary set is a finite collection of distinct points e(alpha_j) on the
unit circle, where e(x) = exp(2 pi i x). Each point contributes a pair of
deficiency generators with coefficients e(-k alpha)/(k -+ i); their Gram
matrix is Z(alpha_a - alpha_b) for the kernel Z(x) = sum_{k>=0} e(kx)/(1+k^2).
Inner products are conjugate-linear in the first argument.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from typing import List, Optional, Sequence

import numpy as np
from scipy import integrate, linalg, optimize, stats

from .errors import BracketError, DegenerateSetError, DimensionError, DomainError, PoleError, QuadratureError
from .specfun import CONSTANTS, DEFAULT_CONTROL, K, SeriesControl, digamma, hurwitz_Z, trigamma

ANGLE_SEP = 1e-12
GROUP_TOL = 1e-8
PHASE_TOL = 1e-10
CELL_EPS = 1e-9
NEG_LIMIT = 1e300
NULL_TOL = 1e-10
GRAM_COND = 1e-8  # min eigenvalue grows linearly in the gap: rejects gaps below ~4e-8


def _e(x):
    return np.exp(2j * np.pi * np.asarray(x, dtype=float))


def _wrap(x: float) -> float:
    """Reduce to [-1/2, 1/2)."""
    return float(x) - math.floor(float(x) + 0.5)


# --------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class BoundarySet:
    """Distinct angles in [0, 1); the points are e(angle)."""

    angles: tuple

    def __post_init__(self):
        a = tuple(float(x) % 1.0 for x in self.angles)
        if len(a) == 0:
            raise DomainError("a boundary set needs at least one point")
        if any(not math.isfinite(x) for x in a):
            raise DomainError("angles must be finite")
        for i in range(len(a)):
            for j in range(i):
                if abs(_wrap(a[i] - a[j])) <= ANGLE_SEP:
                    raise DegenerateSetError(f"angles {a[j]!r} and {a[i]!r} coincide")
        object.__setattr__(self, "angles", a)

    @property
    def m(self) -> int:
        return len(self.angles)

    @property
    def points(self) -> np.ndarray:
        return _e(self.angles)

    def to_dict(self) -> dict:
        return {"angles": [repr(a) for a in self.angles]}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundarySet":
        return cls(tuple(float(Decimal(str(s))) for s in d["angles"]))


@dataclass
class GramKernel:
    F: BoundarySet
    Z_matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def sqrt(self) -> np.ndarray:
        return (self.eigenvectors * np.sqrt(self.eigenvalues)) @ self.eigenvectors.conj().T

    def inv_sqrt(self) -> np.ndarray:
        return (self.eigenvectors / np.sqrt(self.eigenvalues)) @ self.eigenvectors.conj().T


@dataclass
class IsometryMatrix:
    M: np.ndarray
    defect: float
    accepted: bool = True

    def to_dict(self) -> dict:
        return {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.M]}

    @staticmethod
    def matrix_from_dict(d: dict) -> np.ndarray:
        rows = d["matrix"]
        return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def gram_matrix(angles: Sequence[float], ctl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
    a = np.asarray(angles, dtype=float)
    m = len(a)
    Zm = np.empty((m, m), dtype=complex)
    for i in range(m):
        Zm[i, i] = K
        for j in range(i):
            z = hurwitz_Z(a[i] - a[j], ctl)
            Zm[i, j] = z
            Zm[j, i] = z.conjugate()
    return Zm


def gram(F: BoundarySet, ctl: SeriesControl = DEFAULT_CONTROL) -> GramKernel:
    """Gram matrix Z(alpha_a - alpha_b) with its eigendecomposition."""
    Zm = gram_matrix(F.angles, ctl)
    w, V = linalg.eigh(Zm)
    if w[0] <= GRAM_COND * w[-1]:
        raise DegenerateSetError(f"Gram matrix is numerically singular (min eigenvalue {w[0]:.3e})")
    return GramKernel(F, Zm, w, V)


def K_even_odd() -> tuple:
    """Sums of 1/(1+k^2) over even and odd k >= 0."""
    k_ev = 0.5 * (1.0 + 0.5 * math.pi / math.tanh(0.5 * math.pi))
    # Odd part: sum_{j>=0} 1/(1+(2j+1)^2) = (pi/4) tanh(pi/2).
    k_odd = 0.25 * math.pi * math.tanh(0.5 * math.pi)
    return k_ev, k_odd


# --------------------------------------------------------------------------
# The isometry group


def _as_matrix(M) -> np.ndarray:
    return np.atleast_2d(np.asarray(M.M if isinstance(M, IsometryMatrix) else M, dtype=complex))


def is_in_GF(M, gk: GramKernel, tol: float = GROUP_TOL) -> IsometryMatrix:
    """Test M^H Z M = Z entrywise to within ``tol``."""
    A = _as_matrix(M)
    m = gk.F.m
    if A.shape != (m, m):
        raise DimensionError(f"matrix shape {A.shape} does not match m={m}")
    defect = float(np.max(np.abs(A.conj().T @ gk.Z_matrix @ A - gk.Z_matrix)))
    return IsometryMatrix(A, defect, defect <= tol)


def from_unitary(U, gk: GramKernel) -> IsometryMatrix:
    """Conjugate a unitary U into the group: M = Z^{-1/2} U Z^{1/2}."""
    U = _as_matrix(U)
    M = gk.inv_sqrt() @ U @ gk.sqrt()
    return is_in_GF(M, gk)


def sample_GF(gk: GramKernel, seed=None) -> IsometryMatrix:
    """Random group element built from a Haar-distributed unitary."""
    rng = np.random.default_rng(seed)
    m = gk.F.m
    if m == 1:
        U = np.array([[np.exp(2j * np.pi * rng.random())]])
    else:
        U = stats.unitary_group.rvs(m, random_state=rng)
    return from_unitary(U, gk)


def cayley_phases(M, gk: GramKernel):
    """Eigenphases and eigenvectors of the unitary Z^{1/2} M Z^{-1/2}."""
    U = gk.sqrt() @ _as_matrix(M) @ gk.inv_sqrt()
    T, V = linalg.schur(U, output="complex")
    return np.angle(np.diag(T)), V


# --------------------------------------------------------------------------
# Kernel sums along the boundary set


def _one_minus(w: complex, u: float) -> complex:
    # 1 - z e^{-u} without cancellation, given w = 1 - z
    return -math.expm1(-u) + w * math.exp(-u)


def _panel_quad(f, scale: float) -> complex:
    # int_0^inf f over panels [0, scale], then geometrically growing panels up
    # to 40, then [40, inf); resolves the scale |1 - z| of the near-pole.
    edges = [0.0]
    if 0.0 < scale < 10.0:
        x = scale
        while x < 40.0:
            edges.append(x)
            x *= 4.0
    edges.append(40.0)
    edges.append(np.inf)
    total, err = 0j, 0.0
    # roundoff warnings fire on panels already at machine level; the summed
    # error estimate is checked instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(f, lo, hi, complex_func=True, epsabs=1e-16, epsrel=1e-13, limit=200)
            total += val
            err += abs(e.real) + abs(e.imag)
    if err > 1e-9 * max(1.0, abs(total)):
        raise QuadratureError(f"kernel tail quadrature error estimate {err:.2e}")
    return total


def _tail_laplace(z: complex, w: complex, a: float, k0: int, power: int) -> complex:
    # sum_{k>=k0} z^k / (k - lam)^power with a = k0 - lam > 0, in the scaled
    # variable s = a t: z^k0 a^-power int s^(power-1) e^{-s} / (1 - z e^{-s/a}) ds
    def f(s):
        return s ** (power - 1) * math.exp(-s) / _one_minus(w, s / a)

    val = z**k0 * _panel_quad(f, a * abs(w))
    for _ in range(power):
        val /= a
    return val


def _tail_cos(z: complex, w: complex, k0: int) -> complex:
    # sum_{k>=k0} z^k k/(1+k^2) = z^k0 int e^{-k0 t} cos t / (1 - z e^{-t}) dt
    def f(t):
        return math.exp(-k0 * t) * math.cos(t) / _one_minus(w, t)

    return z**k0 * _panel_quad(f, abs(w))


def _check_lambda(lam: float, skip: Optional[int]) -> None:
    if lam >= -0.5 and abs(lam - round(lam)) < 1e-12 and round(lam) != skip:
        raise PoleError(f"lambda={lam!r} is a pole")


def kernel_Q(x: float, lam: float, skip: Optional[int] = None) -> complex:
    """Q(x, lam) = sum_{k>=0} e(kx) [1/(k - lam) - k/(1+k^2)].

    With ``skip = n`` the pole term 1/(n - lam) is left out, which makes
    the sum regular at lam = n.
    """
    lam = float(lam)
    _check_lambda(lam, skip)
    t = _wrap(x)
    if t == 0.0:
        if skip is None:
            return complex(CONSTANTS.re_psi_i - digamma(-lam, 0.0))
        if lam == skip:
            return complex(CONSTANTS.re_psi_i - digamma(skip + 1.0))
        return complex(CONSTANTS.re_psi_i - digamma(-lam, 0.0) - 1.0 / (skip - lam))
    z = complex(_e(t))
    w = -complex(np.expm1(2j * np.pi * t))
    k0 = max(1, int(math.floor(lam)) + 2)
    if skip is not None:
        k0 = max(k0, skip + 2)
    ks = np.arange(k0)
    terms = -ks / (1.0 + ks * ks) + 0j
    inv = np.empty(k0, dtype=complex)
    for k in range(k0):
        inv[k] = 0.0 if k == skip else 1.0 / (k - lam)
    head = np.sum(z**ks * (inv + terms))
    return complex(head + _tail_laplace(z, w, k0 - lam, k0, 1) - _tail_cos(z, w, k0))


def kernel_Q_prime(x: float, lam: float) -> complex:
    """d/dlam Q(x, lam) = sum_{k>=0} e(kx)/(k - lam)^2."""
    lam = float(lam)
    _check_lambda(lam, None)
    t = _wrap(x)
    if t == 0.0:
        return complex(trigamma(-lam, 0.0))
    z = complex(_e(t))
    w = -complex(np.expm1(2j * np.pi * t))
    k0 = max(1, int(math.floor(lam)) + 2)
    ks = np.arange(k0)
    head = np.sum(z**ks / (ks - lam) / (ks - lam))
    return complex(head + _tail_laplace(z, w, k0 - lam, k0, 2))


def kernel_R3(x: float) -> complex:
    """sum_{k>=0} e(kx) k/(1+k^2) for x not an integer (log-divergent at integers)."""
    t = _wrap(x)
    if t == 0.0:
        raise PoleError("the sum diverges at integer x")
    z = complex(_e(t))
    return complex(_tail_cos(z, -complex(np.expm1(2j * np.pi * t)), 1))


def _hermitian_from(angles, fn) -> np.ndarray:
    a = np.asarray(angles, dtype=float)
    m = len(a)
    out = np.empty((m, m), dtype=complex)
    for i in range(m):
        out[i, i] = fn(0.0)
        for j in range(i):
            v = fn(a[i] - a[j])
            out[i, j] = v
            out[j, i] = v.conjugate()
    return out


def Q_matrix(F: BoundarySet, lam: float, skip: Optional[int] = None) -> np.ndarray:
    """Entries Q(beta - alpha_a, lam) for beta, alpha_a in F."""
    return _hermitian_from(F.angles, lambda d: kernel_Q(d, lam, skip))


# --------------------------------------------------------------------------
# Spectral generating function


def _psi_vector(psi, m: int) -> np.ndarray:
    v = np.atleast_1d(np.asarray(psi, dtype=complex))
    if v.shape != (m,):
        raise DimensionError(f"psi has shape {v.shape}, expected ({m},)")
    if not np.any(v):
        raise DomainError("psi must be nonzero")
    return v


def F_M(lam: float, F: BoundarySet, M, psi, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Generating function sum_k sum_alpha e(k alpha) [psi (lam - i)(k + i) + (M psi)(lam + i)(k - i)] / ((k - lam)(k^2 + 1)).

    Evaluated through partial fractions:
    sum_alpha (psi + M psi)_alpha Q(alpha, lam) - i (psi - M psi)_alpha Z(alpha).
    """
    A = _as_matrix(M)
    v = _psi_vector(psi, F.m)
    if A.shape != (F.m, F.m):
        raise DimensionError("M does not match the boundary set")
    chi = A @ v
    total = 0j
    for j, alpha in enumerate(F.angles):
        total += (v[j] + chi[j]) * kernel_Q(alpha, lam) - 1j * (v[j] - chi[j]) * hurwitz_Z(alpha, ctl)
    return complex(total)


def F_M_prime(lam: float, F: BoundarySet, M, psi) -> complex:
    """Derivative sum_alpha (psi + M psi)_alpha sum_k e(k alpha)/(k - lam)^2."""
    A = _as_matrix(M)
    v = _psi_vector(psi, F.m)
    if A.shape != (F.m, F.m):
        raise DimensionError("M does not match the boundary set")
    chi = A @ v
    return complex(sum((v[j] + chi[j]) * kernel_Q_prime(alpha, lam) for j, alpha in enumerate(F.angles)))


def F_M_series(lam: float, F: BoundarySet, M, psi, n_terms: int = 200000) -> complex:
    """Direct truncated sum of the generating function (tail O(1/N))."""
    _check_lambda(lam, None)
    A = _as_matrix(M)
    v = _psi_vector(psi, F.m)
    chi = A @ v
    k = np.arange(n_terms, dtype=float)
    den = (k - lam) * (k * k + 1.0)
    total = 0j
    for j, alpha in enumerate(F.angles):
        ph = _e(k * alpha)
        total += np.sum(ph * (v[j] * (lam - 1j) * (k + 1j) + chi[j] * (lam + 1j) * (k - 1j)) / den)
    return complex(total)


# --------------------------------------------------------------------------
# Spectrum of the extension attached to M


def extension_system(F: BoundarySet, gk: GramKernel, M, lam: float) -> np.ndarray:
    """Matrix L(lam) = (Q - iZ) + (Q + iZ) M; lam is an eigenvalue iff L is singular."""
    Qm = Q_matrix(F, lam)
    A = _as_matrix(M)
    return (Qm - 1j * gk.Z_matrix) + (Qm + 1j * gk.Z_matrix) @ A


@dataclass(frozen=True)
class ExtensionEigenvalue:
    lam: float
    lo: float
    hi: float
    multiplicity: int
    residual: float


@dataclass
class ExtensionSpectrum:
    F: BoundarySet
    M: np.ndarray
    n_max: int
    entries: List[ExtensionEigenvalue] = field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        out = []
        for e in self.entries:
            out.extend([e.lam] * e.multiplicity)
        return np.array(out)

    def count_in(self, lo: float, hi: float) -> int:
        return sum(e.multiplicity for e in self.entries if lo <= e.lam < hi)


class _Reduced:
    """Hermitian pencil B(lam) = W^H Z^{-1/2} Q(lam) Z^{-1/2} W - diag tan(phase/2)."""

    def __init__(self, F: BoundarySet, gk: GramKernel, M):
        self.F, self.gk, self.M = F, gk, _as_matrix(M)
        phases, V = cayley_phases(self.M, gk)
        free = np.abs(1.0 + np.exp(1j * phases)) < PHASE_TOL
        self.W = V[:, ~free]
        self.shift = np.tan(0.5 * phases[~free])
        self.size = self.W.shape[1]
        self._isq = gk.inv_sqrt()

    def matrix(self, lam: float) -> np.ndarray:
        Qt = self._isq @ Q_matrix(self.F, lam) @ self._isq
        B = self.W.conj().T @ Qt @ self.W - np.diag(self.shift)
        return 0.5 * (B + B.conj().T)

    def eigs(self, lam: float) -> np.ndarray:
        if self.size == 0:
            return np.empty(0)
        return linalg.eigvalsh(self.matrix(lam))

    def neg(self, lam: float) -> int:
        return int(np.sum(self.eigs(lam) < 0.0))


def _residual(F, gk, M, lam: float) -> float:
    # smallest singular value relative to the size of the two terms of L
    Qm = Q_matrix(F, lam)
    A = _as_matrix(M)
    L = (Qm - 1j * gk.Z_matrix) + (Qm + 1j * gk.Z_matrix) @ A
    scale = (linalg.norm(Qm, 2) + linalg.norm(gk.Z_matrix, 2)) * (1.0 + linalg.norm(A, 2))
    return float(linalg.svdvals(L)[-1] / max(scale, 1e-300))


def _integer_multiplicity(F: BoundarySet, gk: GramKernel, M, n: int) -> int:
    A = _as_matrix(M)
    m = F.m
    a = np.asarray(F.angles)
    w = _e(-n * a)
    u = _e(n * a)
    Qr = Q_matrix(F, float(n), skip=n)
    top = np.concatenate([w @ (np.eye(m) + A), [0.0]])
    body = np.hstack([(Qr - 1j * gk.Z_matrix) + (Qr + 1j * gk.Z_matrix) @ A, u[:, None]])
    S = np.vstack([top[None, :], body])
    s = linalg.svdvals(S)
    return int(np.sum(s < NULL_TOL * s[0]))


def _cell_roots_cayley(red: _Reduced, lo: float, hi: float) -> List[float]:
    nlo, nhi = red.neg(lo), red.neg(hi)
    roots = []
    for j in range(nhi, nlo):
        f = lambda x, j=j: red.eigs(x)[j]
        roots.append(optimize.brentq(f, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=300))
    return roots


def _cell_roots_determinant(red: _Reduced, lo: float, hi: float, samples: int = 64) -> List[float]:
    det = lambda x: float(np.real(linalg.det(red.matrix(x))))
    if math.isinf(lo):
        raise BracketError("determinant scan needs a finite left end")
    xs = np.linspace(lo, hi, samples)
    vals = [det(x) for x in xs]
    roots = []
    for x0, x1, f0, f1 in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if f0 == 0.0:
            roots.append(x0)
        elif f0 * f1 < 0.0:
            roots.append(optimize.brentq(det, x0, x1, xtol=1e-14, rtol=1e-14, maxiter=300))
    return roots


def _negative_left_end(red: _Reduced) -> float:
    lo = -2.0
    while red.neg(lo) < red.size:
        lo *= 2.0
        if -lo > NEG_LIMIT:
            raise BracketError("lowest eigenvalue lies below -1e300")
    return lo


def extension_spectrum(
    F: BoundarySet,
    M,
    n_max: int,
    psi_strategy: str = "cayley",
    gk: Optional[GramKernel] = None,
) -> ExtensionSpectrum:
    """All eigenvalues in (-inf, n_max] of the extension attached to M.

    ``psi_strategy='cayley'`` counts roots per cell by the inertia of a
    Hermitian reduction and finds each with a bracketed solve; the
    ``'determinant'`` strategy scans the sign of its determinant instead.
    Integers are tested separately through a bordered linear system.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    gk = gk or gram(F)
    A = _as_matrix(M)
    if A.shape != (F.m, F.m):
        raise DimensionError("M does not match the boundary set")
    red = _Reduced(F, gk, A)
    if psi_strategy == "cayley":
        finder = _cell_roots_cayley
    elif psi_strategy == "determinant":
        finder = _cell_roots_determinant
    else:
        raise DomainError(f"unknown psi_strategy {psi_strategy!r}")
    out = ExtensionSpectrum(F, A, n_max)

    def add_roots(roots, lo, hi):
        roots = sorted(roots)
        i = 0
        while i < len(roots):
            j = i
            while j + 1 < len(roots) and abs(roots[j + 1] - roots[i]) < 1e-8:
                j += 1
            lam = float(np.mean(roots[i : j + 1]))
            out.entries.append(ExtensionEigenvalue(lam, lo, hi, j - i + 1, _residual(F, gk, A, lam)))
            i = j + 1

    if red.size:
        lo = _negative_left_end(red)
        roots = (_cell_roots_cayley(red, lo, -CELL_EPS) if psi_strategy == "cayley"
                 else _cell_roots_determinant(red, lo, -CELL_EPS, samples=256))
        add_roots(roots, -math.inf, 0.0)
    for n in range(n_max + 1):
        mult = _integer_multiplicity(F, gk, A, n)
        if mult:
            out.entries.append(ExtensionEigenvalue(float(n), float(n), float(n + 1), mult, 0.0))
        if n < n_max and red.size:
            roots = finder(red, n + CELL_EPS, n + 1 - CELL_EPS)
            roots = [r for r in roots if not (mult and abs(r - n) < 1e-8)]
            add_roots(roots, float(n), float(n + 1))
    return out


# --------------------------------------------------------------------------
# Deficiency generators


def deficiency_gram_entry(theta: float, rho: float, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Inner product of the generators attached to angles theta and rho."""
    return hurwitz_Z(theta - rho, ctl)


def deficiency_vector(theta: float, n_terms: int, sign: int = 1) -> np.ndarray:
    """Coefficients e(-k theta)/(k - sign*i) for k < n_terms."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    k = np.arange(n_terms, dtype=float)
    return _e(-k * theta) / (k - sign * 1j)


def combination_norm_sq(F: BoundarySet, phi, n_terms: int = 100000) -> tuple:
    """Truncated squared norm of sum_a phi_a f_a and the closed form phi^H Z phi."""
    v = np.asarray(phi, dtype=complex)
    vec = sum(v[a] * deficiency_vector(F.angles[a], n_terms) for a in range(F.m))
    exact = complex(v.conj() @ gram_matrix(F.angles) @ v).real
    return float(np.vdot(vec, vec).real), exact


def vandermonde_certificate(F: BoundarySet) -> tuple:
    """|det(e(n beta_j))| for n < m, computed numerically and as a product of chord lengths."""
    z = F.points
    m = F.m
    V = z[:, None] ** np.arange(m)[None, :]
    numeric = abs(linalg.det(V))
    prod = 1.0
    for i in range(m):
        for j in range(i):
            prod *= abs(z[i] - z[j])
    return float(numeric), float(prod)


# --------------------------------------------------------------------------
# Serialization


def dump_extension(F: BoundarySet, M) -> str:
    d = F.to_dict()
    d.update(IsometryMatrix(_as_matrix(M), 0.0).to_dict())
    return json.dumps(d)


def load_extension(text: str, tol: float = GROUP_TOL):
    """Parse ``{"angles": [...], "matrix": [...]}``; returns (F, GramKernel, IsometryMatrix)."""
    d = json.loads(text)
    F = BoundarySet.from_dict(d)
    gk = gram(F)
    if "matrix" in d:
        A = IsometryMatrix.matrix_from_dict(d)
    else:
        A = np.eye(F.m, dtype=complex)
    return F, gk, is_in_GF(A, gk, tol)
