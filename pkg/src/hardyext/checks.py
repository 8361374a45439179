"""Invariant suites run by ``hardyext verify``; each returns a Report."""
from __future__ import annotations

import math

import numpy as np

from . import boundary as bd
from . import extfinite as ef
from . import forms as fm
from . import specfun as sf
from . import spectral11 as sp
from .report import Report

SUITES = ("specfun", "spectral", "kernel", "boundary", "forms")


def suite_specfun(rng: np.random.Generator) -> Report:
    rep = Report()
    c = sf.CONSTANTS
    psi_i = complex(sf.digamma(1j))
    n = np.arange(2_000_000, dtype=float)
    brute = float(np.sum(1.0 / (1.0 + n * n))) + 1.0 / 2_000_000
    quad = [c.K, psi_i.imag, brute, sf.re_Z_closed(0.0)]
    rep.add("K consistency quadruple", max(quad) - min(quad) < 1e-10, quad, 1e-10)
    rep.add("Re psi(i)", abs(psi_i.real - 0.0946503) < 1e-6, psi_i.real, 0.0946503)
    zs = rng.uniform(-20, 20, 100) + 1j * rng.uniform(-20, 20, 100)
    err = max(abs(sf.digamma(z.conjugate()) - complex(sf.digamma(z)).conjugate()) for z in zs)
    rep.add("digamma conjugate symmetry", err < 1e-12, err, 1e-12)
    res = [(-k + 1e-6 - (-k)) * sf.digamma(-k + 1e-6) for k in range(6)]
    err = max(abs(r + 1.0) for r in res)
    rep.add("digamma residues -1", err < 1e-5, err, 1e-5)
    xs = rng.uniform(0, 1, 200)
    err = max(abs(sf.hurwitz_Z(x).real - sf.re_Z_closed(x)) for x in xs)
    rep.add("Re Z closed form", err < 1e-10, err, 1e-10)
    err = max(abs(sf.hurwitz_Z(x) - complex(sf.hurwitz_Z(-x)).conjugate()) for x in xs[:50])
    rep.add("Z Hermitian symmetry", err < 1e-12, err, 1e-12)
    pts = rng.uniform(-3, 3, 20)
    Zm = np.array([[sf.hurwitz_Z(a - b) for b in pts] for a in pts])
    low = float(np.linalg.eigvalsh(0.5 * (Zm + Zm.conj().T))[0])
    rep.add("Z positive definite", low >= -1e-10, low, -1e-10)
    per = sf.im_Z_via_periodization(0.25, n_wrap=20)
    rep.add("periodization cross-check", abs(per - sf.hurwitz_Z(0.25).imag) < 1e-4, per, sf.hurwitz_Z(0.25).imag)
    rep.add("li(2)", abs(sf.log_integral(2.0) - 1.04516378011749) < 1e-9, sf.log_integral(2.0), 1.04516378011749)
    return rep


def suite_spectral(rng: np.random.Generator) -> Report:
    rep = Report()
    rep.add("G(-1) lower bound", sp.G(-1.0) > 2 - math.pi / math.tanh(math.pi) / 2, sp.G(-1.0))
    rep.add("G(-2) upper bound", sp.G(-2.0) < -215 / 6188, sp.G(-2.0))
    lams = rng.uniform(-10, 10, 100)
    err = max(abs(sp.G(l) - sp.G(l - 1) + 1 / l) for l in lams)
    rep.add("digamma difference identity", err < 1e-10, err, 1e-10)
    ok = True
    for th in rng.uniform(-math.pi, math.pi, 10):
        vals = sp.spectrum(th, 20).values
        ok &= vals[0] < 0 and all(n - 1 < vals[n] < n for n in range(1, 21))
    rep.add("interval localization", ok, ok)
    gaps = [n - sp.eigenvalue(0.0, n) for n in range(1, 51)]
    rep.add("gap decay at theta=0", all(g > 0 for g in gaps) and all(a > b for a, b in zip(gaps, gaps[1:])), gaps[-1])
    err = max(abs(sp.contour_eigenvalue(th, n) - sp.eigenvalue(th, n)) for th in (0.0, 1.0, -2.0) for n in (1, 3))
    rep.add("contour identity", err < 1e-6, err, 1e-6)
    res, _ = sp.eigen_residual(0.7, 3, 10000)
    rep.add("eigen-residual", res < 1e-6, res, 1e-6)
    return rep


def suite_kernel(rng: np.random.Generator) -> Report:
    rep = Report()
    worst = math.inf
    for _ in range(10):
        m = int(rng.integers(1, 7))
        F = ef.BoundarySet(tuple(np.sort(rng.uniform(0, 1, m))))
        worst = min(worst, float(ef.gram(F).eigenvalues[0]))
    rep.add("Gram positive definite", worst > 0, worst)
    F2 = ef.BoundarySet((0.0, 0.5))
    gk = ef.gram(F2)
    kev, kodd = ef.K_even_odd()
    err = float(np.max(np.abs(np.sort(gk.eigenvalues) - np.sort([2 * kev, 2 * kodd]))))
    rep.add("antipodal Gram eigenvalues 2K_ev, 2K_odd", err < 1e-10, list(gk.eigenvalues), [2 * kev, 2 * kodd])
    F4 = ef.BoundarySet((0.0, 0.25, 0.5, 0.75))
    num, prod = ef.vandermonde_certificate(F4)
    rep.add("Vandermonde identity", abs(num - prod) < 1e-8 * prod, num, prod)
    Fr = ef.BoundarySet((0.1, 0.35, 0.8))
    gr = ef.gram(Fr)
    M1 = ef.sample_GF(gr, int(rng.integers(1 << 31)))
    M2 = ef.sample_GF(gr, int(rng.integers(1 << 31)))
    prod_defect = ef.is_in_GF(M1.M @ M2.M, gr).defect
    inv_defect = ef.is_in_GF(np.linalg.inv(M1.M), gr).defect
    rep.add("sampled group elements", max(M1.defect, M2.defect) < 1e-10, max(M1.defect, M2.defect), 1e-10)
    rep.add("group closure", max(prod_defect, inv_defect) < 4 * ef.GROUP_TOL, max(prod_defect, inv_defect))
    F1 = ef.BoundarySet((0.0,))
    ext = ef.extension_spectrum(F1, [[np.exp(0.9j)]], 5).values
    ref = sp.spectrum(0.9, 5).values
    err = float(np.max(np.abs(ext - ref)))
    rep.add("single-point reduction", err < 1e-8, err, 1e-8)
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    lam = float(rng.uniform(-3, 3))
    if abs(lam - round(lam)) < 0.05:
        lam += 0.1
    h = 1e-5
    fd = (ef.F_M(lam + h, Fr, M1, psi) - ef.F_M(lam - h, Fr, M1, psi)) / (2 * h)
    rel = abs(fd - ef.F_M_prime(lam, Fr, M1, psi)) / abs(fd)
    rep.add("F_M derivative", rel < 1e-6, rel, 1e-6)
    return rep


def suite_boundary(rng: np.random.Generator) -> Report:
    rep = Report()
    F = ef.BoundarySet((0.05, 0.4, 0.7))
    worst = 0.0
    for _ in range(5):
        e = bd.domain_element(F, rng.normal(size=3) + 1j * rng.normal(size=3),
                              rng.normal(size=3) + 1j * rng.normal(size=3),
                              rng.normal(size=3) + 1j * rng.normal(size=3))
        A = bd.adjoint_apply(e)
        for _ in range(5):
            z = 0.85 * math.sqrt(rng.random()) * np.exp(2j * math.pi * rng.random())
            worst = max(worst, abs(A(z) - bd.adjoint_via_projection(e, z)))
    rep.add("adjoint paths agree", worst < 1e-6, worst, 1e-6)
    e = bd.domain_element(F, [1.0, -2.0j], [0, 0, 0], [0, 0, 0])
    rep.add("form vanishes on the minimal domain", abs(bd.residue_boundary_form(e)) < 1e-4, bd.residue_boundary_form(e))
    gk = ef.gram(F)
    M = ef.sample_GF(gk, int(rng.integers(1 << 31)))
    g = bd.isometry_graph_element(F, M.M, rng.normal(size=3) + 1j * rng.normal(size=3), poly=[0.5])
    val = bd.residue_boundary_form(g)
    rep.add("form vanishes on isometry graphs", abs(val) < 1e-4, val, 1e-4)
    e = bd.domain_element(F, [1.0], rng.normal(size=3), rng.normal(size=3) + 1j * rng.normal(size=3))
    a, b = bd.residue_boundary_form(e), bd.coordinate_boundary_form(e)
    rep.add("residue form equals coordinate form", abs(a - b) < 1e-4, a, b)
    f = bd.HardyFunction(rng.normal(size=11) + 1j * rng.normal(size=11))
    err = max(abs(bd.szego_reproduce(f, z) - f(z))
              for z in 0.9 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20)))
    rep.add("Szegö reproduction", err < 1e-8, err, 1e-8)
    p, m = bd.defect_boundary_integrals(128)
    sp_, sm = bd.defect_series(len(p.taylor))
    err = float(max(np.max(np.abs(p.taylor - sp_)), np.max(np.abs(m.taylor - sm))))
    rep.add("defect boundary integrals", err < 1e-8, err, 1e-8)
    return rep


def suite_forms(rng: np.random.Generator) -> Report:
    rep = Report()
    g = fm.glb_demo([1000, 5000])
    rep.add("lower-bound witness", all(0.9 < s < 1.1 for s in g.scaled), g.scaled)
    low = min(fm.dirichlet_neumann_glb(fm.random_admissible(40, rng)) for _ in range(200))
    rep.add("Dirichlet/Neumann ratio >= 1", low >= 1.0, low, 1.0)
    smin = fm.dirichlet_neumann_section_min(200)
    rep.add("section minimum", 1.0 <= smin < 1.05, smin, 1.05)
    grid = np.linspace(-4.7, 4.9, 97)
    err = max(abs(fm.projection_norm(x) - fm.projection_norm_direct(x)) for x in grid)
    rep.add("projection norm", err < 1e-8, err, 1e-8)
    rep.extend(fm.friedrichs_krein_check(5, 10**5), "friedrichs: ")
    rep.extend(fm.haar_generator_check(10**5), "haar: ")
    layers = all(fm.layer_sum(d, n) == d**n for d in (1, 2, 3) for n in range(10))
    rep.add("Fock layer sums", layers, layers)
    w = fm.essential_sa_witness(2, 30)[-1]
    rep.add("Fock divergence witness", w > 1e3, w, 1e3)
    return rep


_RUNNERS = {
    "specfun": suite_specfun,
    "spectral": suite_spectral,
    "kernel": suite_kernel,
    "boundary": suite_boundary,
    "forms": suite_forms,
}


def run(suite: str, seed: int = 0) -> Report:
    names = SUITES if suite == "all" else (suite,)
    rep = Report()
    for name in names:
        if name not in _RUNNERS:
            raise KeyError(name)
        rep.extend(_RUNNERS[name](np.random.default_rng(seed)), f"{name}: ")
    return rep
