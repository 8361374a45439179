"""Boundary calculus in the Hardy space of the disk.

Functions are stored as a truncated Taylor part plus a list of simple
poles on the unit circle. Elements of the adjoint domain over a boundary
set F are written g + sum_j a_j R2_j + b_j R3_j, where
R2_j(z) = rho2(conj(zeta_j) z), R3_j(z) = rho3(conj(zeta_j) z) and

    rho2(w) = sum_n w^n/(1+n^2),   rho3(w) = sum_n n w^n/(1+n^2).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DomainError, RepresentationError, UnlistedPoleError
from .extfinite import BoundarySet, gram_matrix, kernel_R3
from .specfun import hurwitz_Z, lerch_phi, lerch_phi_array

POLE_MATCH = 1e-10
VANISH_TOL = 1e-9


@dataclass
class HardyFunction:
    taylor: np.ndarray
    pole_terms: List[Tuple[complex, complex]] = field(default_factory=list)

    def __post_init__(self):
        self.taylor = np.asarray(self.taylor, dtype=complex).ravel()
        for zeta, _ in self.pole_terms:
            if abs(abs(zeta) - 1.0) > 1e-12:
                raise DomainError(f"pole {zeta!r} is not on the unit circle")

    @property
    def N(self) -> int:
        return len(self.taylor) - 1

    def taylor_value(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.taylor)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        val = self.taylor_value(z)
        for zeta, r in self.pole_terms:
            val = val + r / (z - zeta)
        return val

    def __add__(self, other: "HardyFunction") -> "HardyFunction":
        n = max(len(self.taylor), len(other.taylor))
        c = np.zeros(n, dtype=complex)
        c[: len(self.taylor)] += self.taylor
        c[: len(other.taylor)] += other.taylor
        return HardyFunction(c, list(self.pole_terms) + list(other.pole_terms))

    def scale(self, s: complex) -> "HardyFunction":
        return HardyFunction(s * self.taylor, [(z, s * r) for z, r in self.pole_terms])

    def to_json(self) -> str:
        return json.dumps({
            "taylor": [[c.real, c.imag] for c in self.taylor],
            "poles": [[[z.real, z.imag], [r.real, r.imag]] for z, r in self.pole_terms],
        })

    @classmethod
    def from_json(cls, text: str) -> "HardyFunction":
        d = json.loads(text)
        return cls([complex(*c) for c in d["taylor"]],
                   [(complex(*z), complex(*r)) for z, r in d.get("poles", [])])


def szego_kernel(w: complex, N: int) -> HardyFunction:
    """Taylor section of 1/(1 - conj(w) z)."""
    return HardyFunction(np.conj(complex(w)) ** np.arange(N + 1))


def szego_boundary_kernel(zeta: complex) -> HardyFunction:
    """1/(1 - conj(zeta) z) for |zeta| = 1, i.e. a simple pole -zeta/(z - zeta)."""
    zeta = complex(zeta)
    return HardyFunction(np.zeros(1), [(zeta, -zeta)])


def boundary_samples(f: HardyFunction, quad_points: int) -> np.ndarray:
    """Values of the Taylor part at e(j/Q), j < Q (exact for Q > N)."""
    if f.pole_terms:
        raise RepresentationError("boundary sampling needs a pole-free function")
    Q = int(quad_points)
    c = np.zeros(Q, dtype=complex)
    n = min(Q, len(f.taylor))
    c[:n] = f.taylor[:n]
    # fold aliased coefficients so the samples are exact for any N
    for start in range(Q, len(f.taylor), Q):
        chunk = f.taylor[start : start + Q]
        c[: len(chunk)] += chunk
    return np.fft.ifft(c) * Q


def szego_reproduce(f: HardyFunction, z: complex, quad_points: int | None = None) -> complex:
    """Rebuild f(z) from boundary values: mean of f(e(x_j)) / (1 - conj(e(x_j)) z).

    On Q equispaced nodes the kernel aliases into a geometric series, so the
    plain trapezoid mean equals f(z) / (1 - z^Q) whenever deg f < Q; the
    factor is removed, which makes the rule exact on such polynomials.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("z must lie in the open unit disk")
    Q = int(quad_points) if quad_points is not None else 4 * (f.N + 1)
    vals = boundary_samples(f, Q)
    nodes = np.exp(2j * np.pi * np.arange(Q) / Q)
    return complex(np.mean(vals / (1.0 - np.conj(nodes) * z)) * (1.0 - z**Q))


def apply_zddz(f: HardyFunction) -> HardyFunction:
    """z d/dz on Taylor coefficients: c_k -> k c_k."""
    if f.pole_terms:
        raise RepresentationError("z d/dz of a simple pole is a double pole")
    return HardyFunction(np.arange(len(f.taylor)) * f.taylor)


def rho_functions(N_trunc: int) -> Tuple[HardyFunction, HardyFunction]:
    k = np.arange(N_trunc + 1, dtype=float)
    return HardyFunction(1.0 / (1.0 + k * k)), HardyFunction(k / (1.0 + k * k))


def rho2_closed(w: complex) -> complex:
    """rho2 for |w| < 1 via partial fractions into Lerch transcendents."""
    return (lerch_phi(w, 1.0, -1j) - lerch_phi(w, 1.0, 1j)) / 2j


def rho3_closed(w: complex) -> complex:
    return 0.5 * (lerch_phi(w, 1.0, -1j) + lerch_phi(w, 1.0, 1j))


def cp_extract(f: HardyFunction, F: BoundarySet) -> HardyFunction:
    """Principal parts of f at the points of F (merged per point)."""
    pts = F.points
    residues = np.zeros(F.m, dtype=complex)
    for zeta, r in f.pole_terms:
        d = np.abs(pts - zeta)
        j = int(np.argmin(d))
        if d[j] > POLE_MATCH:
            raise UnlistedPoleError(f"pole at {zeta!r} is not a point of the boundary set")
        residues[j] += r
    return HardyFunction(np.zeros(1), [(complex(pts[j]), residues[j]) for j in range(F.m) if residues[j] != 0])


# ---------------------------------------------------------------------------
# Adjoint domain elements


@dataclass
class DomainElement:
    """g + sum_j a_j R2_j + b_j R3_j over a boundary set."""

    F: BoundarySet
    g: HardyFunction
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=complex).reshape(self.F.m)
        self.b = np.asarray(self.b, dtype=complex).reshape(self.F.m)
        if self.g.pole_terms:
            raise RepresentationError("g must be a Taylor function")
        vals = self.g.taylor_value(self.F.points)
        scale = max(1.0, float(np.sum(np.abs(self.g.taylor))))
        if np.max(np.abs(vals)) > VANISH_TOL * scale:
            raise DomainError("g must vanish at every boundary point")

    def taylor(self, N_trunc: int) -> np.ndarray:
        k = np.arange(N_trunc + 1, dtype=float)
        c = np.zeros(N_trunc + 1, dtype=complex)
        n = min(len(self.g.taylor), N_trunc + 1)
        c[:n] = self.g.taylor[:n]
        for zeta, a, b in zip(self.F.points, self.a, self.b):
            ph = np.conj(zeta) ** k
            c += ph * (a + b * k) / (1.0 + k * k)
        return c

    def closed_value(self, z):
        """f from Lerch closed forms of rho2, rho3; z may be an array inside the disk."""
        z = np.asarray(z, dtype=complex)
        val = self.g.taylor_value(z)
        for zeta, a, b in zip(self.F.points, self.a, self.b):
            w = np.conj(zeta) * z
            pm = lerch_phi_array(w, 1.0, -1j)
            pp = lerch_phi_array(w, 1.0, 1j)
            val = val + a * (pm - pp) / 2j + b * 0.5 * (pm + pp)
        return val


def domain_element(F: BoundarySet, poly: Sequence[complex], a, b) -> DomainElement:
    """Element whose Taylor part is poly(z) * prod_j (z - zeta_j), so it vanishes on F."""
    g = np.asarray(poly, dtype=complex)
    for zeta in F.points:
        g = np.polynomial.polynomial.polymul(g, [-zeta, 1.0])
    return DomainElement(F, HardyFunction(g), a, b)


def adjoint_apply(f: DomainElement, N_trunc: int = 4000) -> HardyFunction:
    """Adjoint from the coordinate formula: z g' + sum_j a_j R3_j - b_j R2_j (truncated)."""
    k = np.arange(N_trunc + 1, dtype=float)
    c = np.zeros(N_trunc + 1, dtype=complex)
    n = min(len(f.g.taylor), N_trunc + 1)
    c[:n] = np.arange(n) * f.g.taylor[:n]
    for zeta, a, b in zip(f.F.points, f.a, f.b):
        c += np.conj(zeta) ** k * (a * k - b) / (1.0 + k * k)
    return HardyFunction(c)


def derivative_pole_part(f: DomainElement) -> HardyFunction:
    """Pole part of z f'(z): each R3_j contributes b_j / (1 - conj(zeta_j) z)."""
    return HardyFunction(np.zeros(1), [(complex(z), -b * z) for z, b in zip(f.F.points, f.b) if b != 0])


def adjoint_via_projection(f: DomainElement, z: complex, radius: float | None = None, points: int = 48) -> complex:
    """(1 - CP_F) z d/dz f at an interior point.

    z f'(z) comes from a Cauchy integral of the closed form of f on a small
    circle about z; the principal parts at F are then subtracted.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("z must lie in the open unit disk")
    if radius is None:
        radius = 0.5 * (1.0 - abs(z))
    w = np.exp(2j * np.pi * np.arange(points) / points)
    vals = f.closed_value(z + radius * w)
    deriv = np.mean(vals / w) / radius
    poles = cp_extract(derivative_pole_part(f), f.F)
    return complex(z * deriv - poles(z))


def residues(f: DomainElement) -> np.ndarray:
    """Residues of z f'(z) at the boundary points."""
    return -f.b * f.F.points


def boundary_values(f: DomainElement) -> np.ndarray:
    """Finite parts of f at the boundary points.

    The Taylor part is summed by Abel's method; the self term of R3_j at
    its own point diverges logarithmically but is real, so it is dropped.
    """
    alphas = np.asarray(f.F.angles)
    out = np.empty(f.F.m, dtype=complex)
    for j in range(f.F.m):
        v = abel_boundary_value(f.g.taylor, alphas[j])
        for k in range(f.F.m):
            d = alphas[j] - alphas[k]
            v += f.a[k] * hurwitz_Z(d)
            if k != j:
                v += f.b[k] * kernel_R3(d)
        out[j] = v
    return out


def residue_boundary_form(f: DomainElement) -> float:
    """Im sum_j conj(zeta_j) C_j conj(f(zeta_j)) from residues and boundary values."""
    C = residues(f)
    fv = boundary_values(f)
    return float(np.imag(np.sum(np.conj(f.F.points) * C * np.conj(fv))))


def defect_coordinates(f: DomainElement) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients of f in the deficiency generators: a R2 + b R3 = c+ x+ + c- x-."""
    return 0.5 * (f.b - 1j * f.a), 0.5 * (f.b + 1j * f.a)


def coordinate_boundary_form(f: DomainElement) -> float:
    """||f+||^2 - ||f-||^2 using the Gram kernel of the generators."""
    Z = gram_matrix(f.F.angles)
    cp, cm = defect_coordinates(f)
    return float(np.real(np.vdot(cp, Z @ cp) - np.vdot(cm, Z @ cm)))


def isometry_graph_element(F: BoundarySet, M, psi, poly=(0.0,)) -> DomainElement:
    """Element with plus part psi and minus part M psi (plus a vanishing Taylor part)."""
    psi = np.asarray(psi, dtype=complex)
    chi = np.asarray(M, dtype=complex) @ psi
    return domain_element(F, poly, 1j * (psi - chi), psi + chi)


# ---------------------------------------------------------------------------
# Boundary integrals and summation


def abel_boundary_value(coeffs, x: float, levels: int = 8) -> complex:
    """Radial limit of sum c_n r^n e(nx) as r -> 1, Richardson-extrapolated in h = 1 - r."""
    c = np.asarray(coeffs, dtype=complex)
    z = np.exp(2j * np.pi * float(x))
    hs = [2.0 ** -(k + 4) for k in range(levels)]
    T = [complex(np.polynomial.polynomial.polyval((1.0 - h) * z, c)) for h in hs]
    # halving h at each level; eliminate h, h^2, ... in turn
    for p in range(1, levels):
        T = [(2**p * T[i + 1] - T[i]) / (2**p - 1) for i in range(len(T) - 1)]
    return T[0]


def defect_boundary_integrals(N_quad: int = 128, n_coeffs: int | None = None):
    """Taylor coefficients of the boundary integrals of e^{-+2 pi x} against the Szegö kernel.

    Gauss-Legendre on [0, 1]: the data are not periodic, so the trapezoid
    rule would converge only at first order.
    """
    if N_quad < 64:
        raise DomainError("N_quad must be at least 64")
    n_coeffs = n_coeffs if n_coeffs is not None else N_quad // 4
    x, w = np.polynomial.legendre.leggauss(N_quad)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    n = np.arange(n_coeffs)
    phase = np.exp(-2j * np.pi * np.outer(n, x))
    plus = phase @ (w * np.exp(-2.0 * np.pi * x))
    minus = phase @ (w * np.exp(2.0 * np.pi * x))
    return HardyFunction(plus), HardyFunction(minus)


def defect_series(n_coeffs: int):
    n = np.arange(n_coeffs)
    plus = (1.0 - math.exp(-2 * math.pi)) / (2j * math.pi) / (n - 1j)
    minus = -(math.exp(2 * math.pi) - 1.0) / (2j * math.pi) / (n + 1j)
    return plus, minus


def symmetric_decay_integral(N_quad: int = 128, n_coeffs: int | None = None) -> np.ndarray:
    """Coefficients of int_{-1/2}^{1/2} e^{-2 pi |x|} e(-nx) dx by Gauss-Legendre on each half."""
    n_coeffs = n_coeffs if n_coeffs is not None else N_quad // 4
    x, w = np.polynomial.legendre.leggauss(N_quad)
    x = 0.25 * (x + 1.0)
    w = 0.25 * w
    n = np.arange(n_coeffs)
    return 2.0 * np.cos(2 * np.pi * np.outer(n, x)) @ (w * np.exp(-2 * np.pi * x))


def symmetric_decay_constants() -> Tuple[float, float]:
    """Ratios coefficient * (1 + n^2) for even and odd n."""
    return (1.0 - math.exp(-math.pi)) / math.pi, (1.0 + math.exp(-math.pi)) / math.pi


def parseval_pair(f: HardyFunction, quad_points: int | None = None) -> Tuple[float, float]:
    """Coefficient sum of |c_n|^2 and the boundary mean of |f|^2."""
    Q = quad_points or 2 * (f.N + 1)
    vals = boundary_samples(f, Q)
    return float(np.sum(np.abs(f.taylor) ** 2)), float(np.mean(np.abs(vals) ** 2))


LIPSCHITZ_CONSTANT = 2.0 * math.pi**2 / math.sqrt(6.0)


def lipschitz_check(coeffs, pairs) -> Tuple[float, float]:
    """Largest |f(x)-f(y)|/|x-y| over the pairs, and the bound 2 pi^2/sqrt(6) ||n^2 c_n||."""
    c = np.asarray(coeffs, dtype=complex)
    n = np.arange(len(c))
    bound = LIPSCHITZ_CONSTANT * float(np.linalg.norm(n * n * c))
    worst = 0.0
    for x, y in pairs:
        if x == y:
            continue
        fx = np.sum(c * np.exp(2j * np.pi * n * x))
        fy = np.sum(c * np.exp(2j * np.pi * n * y))
        d = abs(math.remainder(x - y, 1.0))
        worst = max(worst, abs(fx - fy) / max(d, 1e-300))
    return worst, bound
