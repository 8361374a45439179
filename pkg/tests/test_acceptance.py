"""Acceptance criteria 1-16, each at its stated tolerance.

Tests are named test_cNN_*; the conftest hook prints one PASS/FAIL line per
criterion at the end of the run. Where a literal target cannot be met, the
literal assertion is kept as a strict xfail next to the corrected check.

Run standalone with ``python3 tests/test_acceptance.py``.
"""
import math
import sys
from fractions import Fraction

import numpy as np
import pytest

from hardyext import boundary as bd
from hardyext import extfinite as ef
from hardyext import forms as fm
from hardyext import specfun as sf
from hardyext import spectral11 as sp

RNG_SEED = 20240601


def rng():
    return np.random.default_rng(RNG_SEED)


# 1 ---------------------------------------------------------------------------

def test_c01_constants_psi_i():
    psi_i = complex(sf.digamma(1j))
    K = 0.5 * (1 + math.pi / math.tanh(math.pi))
    assert abs(K - 2.0766740474) < 1e-10
    assert abs(psi_i.imag - K) < 1e-6
    assert abs(sf.CONSTANTS.K - K) < 1e-15
    assert abs(psi_i.real - 0.0946503) < 1e-6


def test_c01_gamma0_magnitude():
    g0 = sf.CONSTANTS.gamma0
    assert abs(g0 - (2 * np.euler_gamma + 2 * complex(sf.digamma(1j)).real)) < 1e-14
    assert abs(abs(g0) - 1.34373) < 1e-4


@pytest.mark.xfail(strict=True, reason="the second-order coefficient gives gamma0 = +1.34373; see ledger")
def test_c01_gamma0_literal_sign():
    assert abs(sf.CONSTANTS.gamma0 - (-1.34373)) < 1e-4


# 2 ---------------------------------------------------------------------------

def test_c02_root_bracketing():
    assert sp.G(-1.0) > 0.4233
    assert sp.G(-2.0) < -0.0347
    lam0 = sp.eigenvalue(0.0, 0)
    assert -2.0 < lam0 < -1.0
    assert abs(sp.G(lam0)) < 1e-10


# 3 ---------------------------------------------------------------------------

def test_c03_functional_identity():
    r = rng()
    lams = r.uniform(-20, 20, 100)
    lams = lams[np.abs(lams - np.round(lams)) > 1e-3]
    assert len(lams) >= 95
    err = max(abs(sp.G(l) - sp.G(l - 1) + 1 / l) for l in lams)
    assert err < 1e-10


# 4 ---------------------------------------------------------------------------

def test_c04_interval_structure():
    r = rng()
    for th in r.uniform(-math.pi, math.pi, 50):
        vals = sp.spectrum(th, 30).values
        assert vals[0] < 0
        for n in range(1, 31):
            assert n - 1 < vals[n] < n


def test_c04_gaps_positive_decreasing():
    gaps = np.array([n - sp.eigenvalue(0.0, n) for n in range(1, 101)])
    assert np.all(gaps > 0)
    assert np.all(np.diff(gaps) < 0)
    # the decay is logarithmic: gap * ln n stays bounded
    n = np.arange(1, 101)
    assert np.all(gaps[9:] * np.log(n[9:]) < 1.0)


@pytest.mark.xfail(strict=True, reason="the gap decays like 1/ln n; at n = 100 it is 0.19355; see ledger")
def test_c04_gap_below_1e2_at_n100():
    assert 100 - sp.eigenvalue(0.0, 100) < 1e-2


# 5 ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 5])
def test_c05_asymptotic_third_order(n):
    C = []
    for delta in (1e-2, 1e-3):
        t = math.pi - delta
        C.append(abs(sp.eigenvalue(t, n) - sp.asymptotic_lambda(t, n)) / delta**3)
    assert max(C) < 1.0
    assert 0.5 < C[0] / C[1] < 2.0


# 6 ---------------------------------------------------------------------------

def test_c06_contour_identity():
    for th in (0.0, 1.0, -2.0):
        for n in range(1, 6):
            assert abs(sp.contour_eigenvalue(th, n) - sp.eigenvalue(th, n)) < 1e-6


# 7 ---------------------------------------------------------------------------

def test_c07_eigenvector_orthogonality():
    for th in (0.0, 1.0):
        ys = [sp.eigenvector(th, n, 100_000) for n in range(11)]
        Y = np.array([y.coefficients for y in ys])
        G = Y @ Y.T
        d = np.sqrt(np.diag(G))
        ratio = np.abs(G) / np.outer(d, d)
        np.fill_diagonal(ratio, 0.0)
        assert ratio.max() < 1e-3
        for y in ys:
            exact = sp.eigenvector_norm_sq(y.lam)
            assert exact == pytest.approx(y.lam**2 * float(sf.trigamma(-y.lam, 0.0)), rel=1e-14)
            assert abs(y.norm_sq - exact) < 1e-6 * exact


# 8 ---------------------------------------------------------------------------

def test_c08_gram_positive_definite():
    r = rng()
    for _ in range(50):
        m = int(r.integers(1, 9))
        F = ef.BoundarySet(tuple(r.uniform(0, 1, m)))
        assert np.linalg.eigvalsh(ef.gram_matrix(F.angles))[0] > 0


def test_c08_antipodal_eigenpairs():
    gk = ef.gram(ef.BoundarySet((0.0, 0.5)))
    kev, kodd = ef.K_even_odd()
    order = np.argsort(gk.eigenvalues)[::-1]
    vals = gk.eigenvalues[order]
    vecs = gk.eigenvectors[:, order]
    assert np.allclose(vals, [2 * kev, 2 * kodd], atol=1e-10, rtol=0)
    for v, ref in zip(vecs.T, (np.array([1, 1]) / math.sqrt(2), np.array([1, -1]) / math.sqrt(2))):
        phase = np.vdot(ref, v)
        assert np.max(np.abs(v / phase * abs(phase) - ref)) < 1e-10


@pytest.mark.xfail(strict=True, reason="the eigenvalues are 2 K_ev and 2 K_odd; see ledger")
def test_c08_antipodal_literal_values():
    gk = ef.gram(ef.BoundarySet((0.0, 0.5)))
    kev, kodd = ef.K_even_odd()
    assert np.allclose(np.sort(gk.eigenvalues), np.sort([kev, kodd]), atol=1e-10, rtol=0)


def test_c08_vandermonde():
    r = rng()
    for _ in range(20):
        m = int(r.integers(1, 9))
        F = ef.BoundarySet(tuple(r.uniform(0, 1, m)))
        numeric, product = ef.vandermonde_certificate(F)
        assert abs(abs(numeric) - product) <= 1e-8 * product


# 9 ---------------------------------------------------------------------------

def test_c09_group_sampling_and_closure():
    r = rng()
    for _ in range(10):
        m = int(r.integers(1, 6))
        gk = ef.gram(ef.BoundarySet(tuple(r.uniform(0, 1, m))))
        M1 = ef.sample_GF(gk, int(r.integers(1 << 31)))
        M2 = ef.sample_GF(gk, int(r.integers(1 << 31)))
        assert M1.defect < 1e-10 and M2.defect < 1e-10
        assert ef.is_in_GF(M1.M @ M2.M, gk).defect < 4 * ef.GROUP_TOL
        assert ef.is_in_GF(np.linalg.inv(M1.M), gk).defect < 4 * ef.GROUP_TOL


def test_c09_single_point_reduction():
    for alpha in (0.0, 0.37):
        F = ef.BoundarySet((alpha,))
        for th in (0.0, 1.0, -2.0, 2.5, math.pi):
            ext = ef.extension_spectrum(F, [[np.exp(1j * th)]], 8).values
            ref = sp.spectrum(th, 8).values
            assert ext.shape == ref.shape
            assert np.max(np.abs(ext - ref)) < 1e-8


# 10 --------------------------------------------------------------------------

def test_c10_F_M_derivative():
    r = rng()
    h = 1e-5
    for _ in range(20):
        m = int(r.integers(1, 5))
        F = ef.BoundarySet(tuple(r.uniform(0, 1, m)))
        M = ef.sample_GF(ef.gram(F), int(r.integers(1 << 31))).M
        psi = r.normal(size=m) + 1j * r.normal(size=m)
        lam = float(r.uniform(-4, 4))
        if abs(lam - round(lam)) < 0.05:
            lam += 0.2
        fd = (ef.F_M(lam + h, F, M, psi) - ef.F_M(lam - h, F, M, psi)) / (2 * h)
        exact = ef.F_M_prime(lam, F, M, psi)
        assert abs(fd - exact) < 1e-6 * abs(exact)


# 11 --------------------------------------------------------------------------

def _random_element(r, F):
    m = F.m
    c = lambda k: r.normal(size=k) + 1j * r.normal(size=k)
    return bd.domain_element(F, c(int(r.integers(1, 4))), c(m), c(m))


def test_c11_adjoint_paths():
    r = rng()
    worst = 0.0
    for _ in range(50):
        F = ef.BoundarySet(tuple(r.uniform(0, 1, int(r.integers(1, 4)))))
        e = _random_element(r, F)
        A = bd.adjoint_apply(e)
        rad = 0.9 * np.sqrt(r.random(20))
        zs = rad * np.exp(2j * np.pi * r.random(20))
        for z in zs:
            worst = max(worst, abs(A(z) - bd.adjoint_via_projection(e, z)))
    assert worst < 1e-6


def test_c11_boundary_form_vanishes():
    r = rng()
    for _ in range(10):
        F = ef.BoundarySet(tuple(r.uniform(0, 1, int(r.integers(1, 4)))))
        zero = np.zeros(F.m)
        e = bd.domain_element(F, r.normal(size=3) + 1j * r.normal(size=3), zero, zero)
        assert abs(bd.residue_boundary_form(e)) < 1e-4
        gk = ef.gram(F)
        M = ef.sample_GF(gk, int(r.integers(1 << 31))).M
        psi = r.normal(size=F.m) + 1j * r.normal(size=F.m)
        g = bd.isometry_graph_element(F, M, psi, poly=r.normal(size=2))
        assert abs(bd.residue_boundary_form(g)) < 1e-4


# 12 --------------------------------------------------------------------------

def _re_Z_series(x):
    # sum cos(2 pi n x)/(1+n^2) = 1 + S2 - S4 + sum cos/(n^4 (1+n^2)), S2k from Bernoulli polynomials
    t = x - np.floor(x)
    s2 = np.pi**2 * (t * t - t + 1.0 / 6.0)
    b4 = t**4 - 2 * t**3 + t**2 - 1.0 / 30.0
    s4 = -((2 * np.pi) ** 4) * b4 / (2 * 24)
    n = np.arange(1, 20001, dtype=float)
    rest = np.cos(2 * np.pi * np.outer(t, n)) @ (1.0 / (n**4 * (1 + n * n)))
    return 1.0 + s2 - s4 + rest


def test_c12_real_part_closed_form():
    xs = np.linspace(0.0, 1.0, 1000)
    series = _re_Z_series(xs)
    closed = np.array([sf.re_Z_closed(x) for x in xs])
    assert np.max(np.abs(series - closed)) < 1e-10
    direct = np.array([sf.hurwitz_Z(x).real for x in xs])
    assert np.max(np.abs(direct - closed)) < 1e-10


def test_c12_half_integers_real():
    for x in (-1.5, -0.5, 0.0, 0.5, 1.0, 2.5):
        assert abs(sf.hurwitz_Z(x).imag) < 1e-8


def test_c12_periodization_cross_check():
    for x in (0.1, 0.25, 0.4, 0.75):
        per = sf.im_Z_via_periodization(x, n_wrap=20)
        assert abs(per - sf.hurwitz_Z(x).imag) < 1e-4


# 13 --------------------------------------------------------------------------

def test_c13_glb_demo():
    rep = fm.glb_demo([1000, 10_000, 100_000])
    assert all(0.9 < s < 1.1 for s in rep.scaled)
    assert all(a > b for a, b in zip(rep.ratio, rep.ratio[1:]))


def test_c13_dirichlet_neumann_and_poincare():
    r = rng()
    for _ in range(1000):
        b = fm.random_admissible(int(r.integers(4, 60)), r)
        assert fm.dirichlet_neumann_glb(b) >= 1.0
        lhs, rhs = fm.poincare_check(b)
        assert lhs >= rhs
    assert fm.dirichlet_neumann_section_min(200) < 1.05


# 14 --------------------------------------------------------------------------

def test_c14_projection_norm():
    grid = np.linspace(-5.3, 6.1, 500)
    err = max(abs(fm.projection_norm(x) - fm.projection_norm_direct(x)) for x in grid)
    assert err < 1e-8
    for n in range(0, 6):
        for x in (n, n + 1e-9, n - 1e-9):
            assert abs(fm.projection_norm(x) - 1.0) < 1e-6
    for n in range(1, 6):
        for x in (-n, -n + 1e-9, -n - 1e-9):
            assert fm.projection_norm(x) < 1e-6


# 15 --------------------------------------------------------------------------

def test_c15_friedrichs_krein():
    rep = fm.friedrichs_krein_check(10, 10**6)
    by_name = {c.name: c for c in rep.checks}
    assert by_name["difference vectors are eigen-images"].value == 0.0
    assert by_name["adjoint annihilates e_0"].passed
    witness = by_name["form-domain witness grows like log N"]
    assert witness.value["r2"] > 0.99
    assert rep.passed


# 16 --------------------------------------------------------------------------

def test_c16_fock_norms_exact():
    from itertools import product

    for d in (1, 2, 3):
        for alpha in product(range(21), repeat=d):
            n = sum(alpha)
            if n > 20:
                continue
            expect = Fraction(math.prod(math.factorial(a) for a in alpha), math.factorial(n))
            assert fm.fock_norm_exact(alpha) == expect


def test_c16_layers_and_witnesses():
    for d in (1, 2, 3, 4):
        for n in range(13):
            assert fm.layer_sum(d, n) == d**n
    assert fm.essential_sa_witness(2, 30)[-1] > 1e3
    one = fm.essential_sa_witness(1, 30)
    limit = fm.one_dimensional_limit()
    assert one[-1] < 1.1 * limit
    assert limit - one[-1] < 1.0 / (3 * 30**3)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
