"""Quadratic forms of the diagonal operator and related desk checks.

Covers the vanishing lower bound of k |x_k|^2 under a zero-sum
constraint, the Dirichlet/Neumann sine-series bound, the projection of
exponentials onto the Hardy subspace, the coincidence of the Friedrichs
and Krein extensions, and multinomial norms on the symmetric Fock space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

import numpy as np
from scipy import linalg, special

from .errors import DomainError
from .report import Check, Report
from .specfun import digamma, trigamma

CONSTRAINT_TOL = 1e-10


def _vec(x) -> np.ndarray:
    return np.asarray(x, dtype=complex).ravel()


# ---------------------------------------------------------------------------
# Zero-sum constraint and the vanishing lower bound


def rayleigh_Q(x) -> float:
    """sum k |x_k|^2 / ||x||^2 for a coefficient vector with sum x_k = 0."""
    x = _vec(x)
    if abs(np.sum(x)) > CONSTRAINT_TOL * max(float(np.sum(np.abs(x))), 1e-300):
        raise DomainError("coefficients must sum to zero")
    norm = float(np.vdot(x, x).real)
    if norm == 0.0:
        raise DomainError("zero vector has no Rayleigh quotient")
    k = np.arange(len(x))
    return float(np.sum(k * np.abs(x) ** 2) / norm)


def glb_witness(n: int) -> np.ndarray:
    """x_0 = -H_n, x_j = 1/j for 1 <= j <= n."""
    if n < 1:
        raise DomainError("n must be positive")
    x = np.zeros(n + 1)
    x[1:] = 1.0 / np.arange(1, n + 1)
    x[0] = -np.sum(x[1:])
    return x


@dataclass
class GLBReport:
    n: List[int]
    ratio: List[float]
    harmonic: List[float]

    @property
    def scaled(self) -> List[float]:
        return [r * s for r, s in zip(self.ratio, self.harmonic)]


def glb_demo(n_list: Iterable[int]) -> GLBReport:
    ns = [int(n) for n in n_list]
    ratios, hs = [], []
    for n in ns:
        x = glb_witness(n)
        ratios.append(rayleigh_Q(x))
        hs.append(float(-x[0]))
    return GLBReport(ns, ratios, hs)


# ---------------------------------------------------------------------------
# Sine and cosine series on (0, pi)
#
# Unnormalised conventions: f = sum a_n cos(nx) = sum b_m sin(mx), with b
# indexed from m = 1 (entry 0 unused).


def _sine_constraints(b: np.ndarray):
    m = np.arange(len(b))
    even = np.sum((m[2::2] // 2) * b[2::2])
    odd = np.sum(m[1::2] * b[1::2])
    return complex(even), complex(odd)


def check_sine_constraints(b, tol: float = CONSTRAINT_TOL) -> None:
    b = _vec(b)
    m = np.arange(len(b))
    scale = max(float(np.sum(m * np.abs(b))), 1e-300)
    even, odd = _sine_constraints(b)
    if abs(even) > tol * scale or abs(odd) > tol * scale:
        raise DomainError("sine coefficients violate the endpoint-derivative constraints")


def dirichlet_neumann_glb(b) -> float:
    """sum m^2 |b_m|^2 / sum |b_m|^2 for admissible sine coefficients."""
    b = _vec(b).copy()
    b[0] = 0.0
    check_sine_constraints(b)
    norm = float(np.sum(np.abs(b) ** 2))
    if norm == 0.0:
        raise DomainError("zero vector has no Rayleigh quotient")
    m = np.arange(len(b))
    return float(np.sum(m * m * np.abs(b) ** 2) / norm)


def _constraint_matrix(N: int) -> np.ndarray:
    m = np.arange(1, N + 1, dtype=float)
    C = np.zeros((2, N))
    C[0] = np.where(m % 2 == 0, m / 2, 0.0)
    C[1] = np.where(m % 2 == 1, m, 0.0)
    return C


def admissible_basis(N: int) -> np.ndarray:
    """Orthonormal basis (columns, indexed m = 1..N) of the admissible section."""
    return linalg.null_space(_constraint_matrix(N))


def dirichlet_neumann_section_min(N: int) -> float:
    """Smallest Rayleigh ratio over admissible vectors supported on 1..N."""
    B = admissible_basis(N)
    m = np.arange(1, N + 1, dtype=float)
    return float(linalg.eigvalsh(B.T @ (m[:, None] ** 2 * B))[0])


def random_admissible(N: int, rng: np.random.Generator) -> np.ndarray:
    """Random admissible sine vector of length N + 1 (entry 0 is zero)."""
    B = admissible_basis(N)
    c = rng.normal(size=B.shape[1]) + 1j * rng.normal(size=B.shape[1])
    # random decay profile so low and high modes both get weight
    c *= np.exp(-rng.uniform(0.0, 2.0) * np.arange(B.shape[1]))
    return np.concatenate([[0.0], B @ c])


def cos_sin_constraint_transform(a, n_terms: int = 2000, orthonormal: bool = False) -> np.ndarray:
    """Sine coefficients b_1..b_M of the function with cosine coefficients a.

    b_m = (4m/pi) sum_{n: m+n odd} a_n / (m^2 - n^2). With ``orthonormal``
    the input and output refer to the orthonormal bases of L^2(0, pi).
    """
    a = _vec(a)
    if orthonormal:
        a = a * np.concatenate([[1.0 / math.sqrt(math.pi)], np.full(len(a) - 1, math.sqrt(2.0 / math.pi))])
    m = np.arange(n_terms + 1, dtype=float)[:, None]
    n = np.arange(len(a), dtype=float)[None, :]
    odd = ((m + n) % 2 == 1) & (m > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(odd, 4.0 * m / (math.pi * (m * m - n * n)), 0.0)
    b = K @ a
    if orthonormal:
        b = b * math.sqrt(math.pi / 2.0)
    return b


def cosine_constraints(a) -> tuple:
    """(sum of even-index a_n, sum of odd-index a_n); both vanish iff f(0) = f(pi) = 0."""
    a = _vec(a)
    return complex(np.sum(a[0::2])), complex(np.sum(a[1::2]))


def _parity_sum(parity: int, n: int) -> float:
    # sum over m >= 1 with m = parity (mod 2) of 1/(m^2 - n^2), n of the other parity
    m0 = 2 if parity == 0 else 1
    return (digamma((m0 + n) / 2.0) - digamma((m0 - n) / 2.0)) / (4.0 * n)


def transformed_constraints(a) -> tuple:
    """Exact values of the sine-side constraint sums for the transform of a.

    m b_m = (4/pi) sum_n a_n [1 + n^2/(m^2 - n^2)]; the constant part sums to
    infinity unless the matching cosine constraint holds, in which case it
    drops out and the rest is summed in closed form with digamma.
    Returns (even_sum, odd_sum) or raises DomainError if a sum diverges.
    """
    a = _vec(a)
    ev, od = cosine_constraints(a)
    scale = max(float(np.sum(np.abs(a))), 1e-300)
    if abs(ev) > CONSTRAINT_TOL * scale or abs(od) > CONSTRAINT_TOL * scale:
        raise DomainError("cosine constraints fail, so the sine constraint sums diverge")
    even = odd = 0j
    for n in range(1, len(a)):
        term = 4.0 / math.pi * a[n] * n * n
        if n % 2 == 1:
            even += 0.5 * term * _parity_sum(0, n)
        else:
            odd += term * _parity_sum(1, n)
    return complex(even), complex(odd)


def constant_function_sine_constant() -> float:
    """Orthonormal sine coefficient of 1/sqrt(pi) times (2k+1) on odd indices: 2 sqrt(2)/pi."""
    b = cos_sin_constraint_transform([1.0], n_terms=11, orthonormal=True)
    return float(np.real(b[1]))


def poincare_check(b) -> tuple:
    """(int |f'|^2, int |f|^2) on (0, pi) by Parseval for admissible sine coefficients."""
    b = _vec(b).copy()
    b[0] = 0.0
    if not np.any(b):
        return 0.0, 0.0
    check_sine_constraints(b)
    m = np.arange(len(b))
    w = np.abs(b) ** 2
    lhs = 0.5 * math.pi * float(np.sum(m * m * w))
    rhs = 0.5 * math.pi * float(np.sum(w))
    return lhs, rhs


# ---------------------------------------------------------------------------
# Projection of e(phi x) onto the Hardy subspace


def projection_norm(phi: float) -> float:
    """1 - sin^2(pi phi)/pi^2 * sum_{n>=1} 1/(phi+n)^2, with limits at integers."""
    phi = float(phi)
    j = round(-phi)
    if j >= 1 and abs(phi + j) < 0.5:
        # the n = j term carries the pole: sin^2(pi phi)/(pi^2 (phi+j)^2) = sinc^2(phi+j)
        rest = trigamma(phi + j + 1.0) + sum(1.0 / (phi + n) ** 2 for n in range(1, j))
        val = 1.0 - float(np.sinc(phi + j)) ** 2 - (math.sin(math.pi * phi) / math.pi) ** 2 * rest
    else:
        if phi == round(phi):
            return 1.0
        val = 1.0 - (math.sin(math.pi * phi) / math.pi) ** 2 * trigamma(phi + 1.0)
    return min(1.0, max(0.0, val))


def projection_norm_direct(phi: float, n_terms: int = 100000) -> float:
    """sum_{n>=0} sinc^2(phi - n) by direct summation plus a Hurwitz-zeta tail."""
    phi = float(phi)
    n = np.arange(n_terms, dtype=float)
    head = float(np.sum(np.sinc(phi - n) ** 2))
    tail = (math.sin(math.pi * phi) / math.pi) ** 2 * float(special.zeta(2.0, n_terms - phi))
    return head + tail


# ---------------------------------------------------------------------------
# Friedrichs and Krein extensions


def log_growth_fit(N_values: Sequence[int], partial: Sequence[float]) -> tuple:
    """Least-squares fit partial ~ slope ln N + c; returns (slope, intercept, R^2)."""
    x = np.log(np.asarray(N_values, dtype=float))
    y = np.asarray(partial, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    return float(coef[0]), float(coef[1]), r2


def linear_growth_fit(N_values: Sequence[int], partial: Sequence[float]) -> tuple:
    x = np.asarray(N_values, dtype=float)
    y = np.asarray(partial, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    return float(coef[0]), float(coef[1]), r2


def friedrichs_krein_check(n_max: int = 10, N_trunc: int = 10**6) -> Report:
    rep = Report()
    # (a) e_n - e_0 has zero sum and D(e_n - e_0) = n e_n
    worst = 0.0
    for n in range(1, n_max + 1):
        x = np.zeros(n_max + 1)
        x[n], x[0] = 1.0, -1.0
        Lx = np.arange(n_max + 1) * x
        target = np.zeros(n_max + 1)
        target[n] = n
        worst = max(worst, abs(x.sum()), float(np.max(np.abs(Lx - target))))
    rep.checks.append(Check("difference vectors are eigen-images", worst == 0.0, worst, 0.0))

    # (b) sqrt(k) y3_k = k^{3/2}/(1+k^2) is not square summable: log growth
    Ns = np.unique(np.geomspace(100, N_trunc, 25).astype(int))
    k = np.arange(N_trunc + 1, dtype=float)
    cums = np.cumsum(k**3 / (1.0 + k * k) ** 2)
    partial = cums[Ns]
    slope, _, r2 = log_growth_fit(Ns, partial)
    rep.checks.append(Check("form-domain witness grows like log N", r2 > 0.99 and abs(slope - 1) < 0.05,
                            {"slope": slope, "r2": r2, "ratio_at_N": float(partial[-1] / math.log(Ns[-1]))},
                            {"r2": 0.99}))

    # (c) graph inner products <e_0, x_+->_* = +-i (conjugate-linear in the first slot)
    t = float(np.sum(1.0 / (1.0 + k * k)))
    phi = -1.0 / (t * (1.0 + k * k))
    phi[0] += 1.0
    y3 = k / (1.0 + k * k)
    adj_e0 = k * phi + y3 / t
    vals = []
    for sign in (1, -1):
        xs = 1.0 / (k - sign * 1j)
        adj_x = sign * 1j * xs
        e0 = np.zeros_like(k)
        e0[0] = 1.0
        vals.append(complex(np.vdot(e0, xs) + np.vdot(adj_e0, adj_x)))
    err = max(abs(vals[0] - 1j), abs(vals[1] + 1j))
    rep.checks.append(Check("graph inner products equal +-i", err < 1e-4, vals, 1e-4))

    # (d) adjoint of e_0 vanishes through its splitting into a domain part and y2/t
    res = float(np.max(np.abs(adj_e0)))
    rep.checks.append(Check("adjoint annihilates e_0", res < 1e-12, res, 1e-12))
    return rep


def haar_generator_check(N: int = 10**6) -> Report:
    """Coefficients 2i/(pi k) on odd k: square summable, but k c_k is not."""
    rep = Report()
    k = np.arange(1, N + 1, 2, dtype=float)
    c = 2j / (math.pi * k)
    s1 = np.cumsum(np.abs(c) ** 2)
    limit = 0.5
    rep.checks.append(Check("coefficients square summable", bool(abs(s1[-1] - limit) < 2.0 / (math.pi**2 * N) + 1e-12),
                            float(s1[-1]), limit))
    s2 = np.cumsum(np.abs(k * c) ** 2)
    idx = np.unique(np.geomspace(10, len(k), 20).astype(int)) - 1
    slope, _, r2 = linear_growth_fit(k[idx], s2[idx])
    expect = 2.0 / math.pi**2
    rep.checks.append(Check("weighted coefficients grow linearly", r2 > 0.999 and abs(slope - expect) < 1e-3 * expect,
                            {"slope": slope, "r2": r2}, {"slope": expect}))
    # triangle wave coefficients 1/(pi^2 k^2) differentiate to 2 pi i k / (pi^2 k^2)
    tri = 1.0 / (math.pi**2 * k**2)
    err = float(np.max(np.abs(2j * math.pi * k * tri - c)))
    rep.checks.append(Check("derivative of triangle wave", err < 1e-15, err, 1e-15))
    return rep


# ---------------------------------------------------------------------------
# Symmetric Fock space


def multinomial(alpha: Sequence[int]) -> int:
    alpha = [int(a) for a in alpha]
    if any(a < 0 for a in alpha):
        raise DomainError("multi-index entries must be nonnegative")
    out, total = 1, 0
    for a in alpha:
        total += a
        out *= math.comb(total, a)
    return out


def log_multinomial(alpha: Sequence[int]) -> float:
    n = sum(alpha)
    return math.lgamma(n + 1) - sum(math.lgamma(a + 1) for a in alpha)


def fock_norm_exact(alpha: Sequence[int]) -> Fraction:
    if len(alpha) < 1:
        raise DomainError("d must be at least 1")
    return Fraction(1, multinomial(alpha))


def fock_norm(alpha: Sequence[int]) -> float:
    """Squared norm of z^alpha: 1/multinomial(|alpha|; alpha)."""
    if len(alpha) < 1:
        raise DomainError("d must be at least 1")
    if sum(alpha) <= 60:
        return 1.0 / multinomial(alpha)
    return math.exp(-log_multinomial(alpha))


def fock_norm_f(coeffs: Dict[tuple, complex]) -> float:
    return float(sum(fock_norm(a) * abs(c) ** 2 for a, c in coeffs.items()))


def compositions(n: int, d: int):
    """Multi-indices of length d and total n."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, d - 1):
            yield (first,) + rest


def layer_sum(d: int, n: int) -> int:
    return sum(multinomial(a) for a in compositions(n, d))


def essential_sa_witness(d: int, n_max: int) -> List[float]:
    """Cumulative sums over |alpha| <= n of multinomial / (1 + sum alpha_j^2)^2, n = 0..n_max."""
    if d < 1:
        raise DomainError("d must be at least 1")
    out, total = [], 0.0
    for n in range(n_max + 1):
        for a in compositions(n, d):
            total += multinomial(a) / (1.0 + sum(x * x for x in a)) ** 2
        out.append(total)
    return out


def one_dimensional_limit() -> float:
    """sum_{n>=0} 1/(1+n^2)^2 in closed form."""
    p = math.pi
    return 0.5 * (1.0 + 0.5 * p * (1.0 / math.tanh(p) + p / math.sinh(p) ** 2))
