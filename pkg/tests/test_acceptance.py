"""Acceptance criteria 1-10, one PASS/FAIL line each (run with -s or -v)."""

import math

import numpy as np
import pytest

from finsler_domains.automorphisms import differential, normalizer, rm_III2
from finsler_domains.curvature import (
    bergman_bisectional,
    bergman_sectional,
    bisectional,
    block_V0,
    kahler_berwald_residual,
    sectional,
)
from finsler_domains.domains import DomainSpec, sample_point, sample_tangent
from finsler_domains.matrix_kernel import random_orthogonal, random_unitary
from finsler_domains.metrics import bergman, cal_B, frak_B, metric, reference_norm_CK
from finsler_domains.norms import f_IV_norm, minkowski_f
from finsler_domains.numdiff import mixed_wirtinger
from finsler_domains.verify import run_suite, sample_seed

SEED = 20261017

KINDS = {
    "I(2,3)": DomainSpec("I", (2, 3), t=1, k=2),
    "II(3)": DomainSpec("II", (3,), t=1, k=2),
    "III(4)": DomainSpec("III", (4,), t=2, k=3),
    "III(5)": DomainSpec("III", (5,), t=1, k=2),
    "IV(5)": DomainSpec("IV", (5,), profile="paper-example"),
}


def report(capsys, n, ok, text):
    with capsys.disabled():
        print(f"\n[criterion {n:>2}] {'PASS' if ok else 'FAIL'}: {text}")


def E(shape, *ij):
    M = np.zeros(shape, dtype=complex)
    for i, j in ij:
        M[i, j] = 1
    return M


def test_criterion_01_extremal_values(capsys):
    errs = []
    t, k = 1.0, 2
    sI = DomainSpec("I", (2, 3), t=t, k=k)
    z = np.zeros((2, 3))
    errs.append(abs(sectional(sI, z, E((2, 3), (0, 0))) + 4 / 5))
    errs.append(abs(sectional(sI, z, E((2, 3), (0, 0), (1, 1))) + (4 / 5) * 2 / (2 + math.sqrt(2))))
    p = 3
    sII = DomainSpec("II", (p,), t=t, k=k)
    z = np.zeros((p, p))
    errs.append(abs(sectional(sII, z, E((p, p), (0, 0))) + 4 / (p + 1)))
    errs.append(abs(sectional(sII, z, np.eye(p)) + 4 / (p + 1) * (1 + t) / (p + t * math.sqrt(p))))
    for q in (4, 5):
        sIII = DomainSpec("III", (q,), t=t, k=k)
        z = np.zeros((q, q))
        V = E((q, q), (0, 1)) - E((q, q), (1, 0))
        errs.append(abs(sectional(sIII, z, V) + 4 / (q - 1) * (1 + t) / (2 + t * 2 ** (1 / k))))
        r = 2 * (q // 2)
        errs.append(abs(sectional(sIII, z, block_V0(q)) + 4 / (q - 1) * (1 + t) / (r + t * r ** (1 / k))))
    worst = max(errs)
    report(capsys, 1, worst < 1e-12, f"extremal sectional values, max error {worst:.2e}")
    assert worst < 1e-12


def test_criterion_02_invariance(capsys):
    specs = [KINDS[n] for n in ("I(2,3)", "II(3)", "III(4)", "III(5)")]
    specs += [DomainSpec("IV", (5,), profile=p) for p in ("bergman", "kobayashi", "paper-example")]
    worst = 0.0
    ok = True
    for spec in specs:
        rep = run_suite("invariance", spec, 200, SEED)
        ok &= rep.passed
        worst = max(worst, max(c.value for c in rep.checks))
    report(capsys, 2, ok, f"automorphism invariance, 200 samples x {len(specs)} specs, max drift {worst:.2e}")
    assert ok and worst < 1e-8


def test_criterion_03_pseudoconvexity(capsys):
    ok, worst_ratio, worst_spec = True, math.inf, 0.0
    for spec in KINDS.values():
        rep = run_suite("pseudoconvexity", spec, 100, SEED)
        ok &= rep.passed
        worst_ratio = min(worst_ratio, min(c.detail["min_eig_ratio"] for c in rep.checks))
        worst_spec = max(worst_spec, max(c.detail["spectrum_error"] for c in rep.checks))
    ok &= worst_ratio > 1e-10 and worst_spec < 1e-9
    report(capsys, 3, ok, f"strong pseudoconvexity, min lambda/|H| {worst_ratio:.3e}, kind IV spectrum error {worst_spec:.2e}")
    assert ok


def test_criterion_04_kahler_berwald(capsys):
    worst, monotone = 0.0, True
    for spec in KINDS.values():
        for i in range(50):
            V = sample_tangent(spec, sample_seed(SEED, i, 2))
            r = kahler_berwald_residual(spec, V)
            if i < 5:
                monotone &= kahler_berwald_residual(spec, V, 5e-5) <= r
            worst = max(worst, r)
    # the same mixed stencil is second order where the mixed derivative is nonzero
    spec = KINDS["I(2,3)"]
    chart = spec.chart
    f = lambda z, v: metric(spec, chart.unflatten(z), chart.unflatten(v)).F_squared
    z0 = chart.flatten(sample_point(spec, 3))
    v0 = chart.flatten(sample_tangent(spec, 3))
    M = [mixed_wirtinger(f, z0, v0, h) for h in (4e-2, 2e-2, 1e-2)]
    ratio = np.abs(M[0] - M[1]).max() / np.abs(M[1] - M[2]).max()
    ok = worst < 1e-5 and monotone and 3.5 < ratio < 4.5
    report(capsys, 4, ok, f"Kahler-Berwald residual max {worst:.2e}, halving monotone {monotone}, stencil order ratio {ratio:.2f}")
    assert worst < 1e-5 and monotone
    assert 3.5 < ratio < 4.5


def test_criterion_05_curvature_oracle(capsys):
    ok, worst = True, 0.0
    for spec in KINDS.values():
        rep = run_suite("curvature-oracle", spec, 50, SEED)
        ok &= rep.passed
        worst = max(worst, max(c.value for c in rep.checks))
    report(capsys, 5, ok, f"closed-form vs FD curvature, max relative error {worst:.2e}")
    assert ok and worst < 5e-4


def test_criterion_06_pinching(capsys):
    specs = list(KINDS.values()) + [
        DomainSpec("I", (3, 3), t=0.5, k=3),
        DomainSpec("IV", (5,), profile="bergman"),
        DomainSpec("IV", (6,), profile="exp-family(0.1,2)"),
    ]
    ok, worst = True, math.inf
    for spec in specs:
        rep = run_suite("bounds", spec, 500, SEED)
        ok &= rep.passed
        worst = min(worst, min(c.margin for c in rep.checks))
    report(capsys, 6, ok, f"pinching, K < 0 and B <= 0 with floors, {len(specs)} specs x 500, min margin {worst:.2e}")
    assert ok


def test_criterion_07_bergman_collapse(capsys):
    worst = 0.0
    for name, spec in KINDS.items():
        if spec.kind == "IV":
            s0 = DomainSpec("IV", spec.dims, profile="bergman")
        else:
            s0 = DomainSpec(spec.kind, spec.dims, t=0, k=spec.k)
        for i in range(50):
            Z = sample_point(s0, sample_seed(SEED, i, 1))
            V = sample_tangent(s0, sample_seed(SEED, i, 2))
            W = sample_tangent(s0, sample_seed(SEED, i, 3))
            g = bergman(s0, Z, V)
            worst = max(worst, abs(metric(s0, Z, V).F_squared - g) / g)
            K = sectional(s0, Z, V)
            worst = max(worst, abs(K - bergman_sectional(s0, Z, V)) / abs(K))
            B = bisectional(s0, Z, V, W)
            worst = max(worst, abs(B - bergman_bisectional(s0, Z, V, W)) / abs(K))
    z = np.zeros((2, 3))
    V, W = E((2, 3), (0, 0)), E((2, 3), (1, 1))

    def defect(spec):
        F2 = lambda X: metric(spec, z, X).F_squared
        return abs(F2(V + W) + F2(V - W) - 2 * F2(V) - 2 * F2(W))

    d0 = defect(DomainSpec("I", (2, 3), t=0))
    d1 = defect(DomainSpec("I", (2, 3), t=1, k=2))
    ok = worst < 1e-12 and d0 < 1e-12 and d1 > 1e-6
    report(capsys, 7, ok, f"Bergman collapse error {worst:.2e}, parallelogram defect t=0 {d0:.1e}, t=1 {d1:.3f}")
    assert ok


def test_criterion_08_kobayashi_coincidence(capsys):
    rng = np.random.default_rng(SEED)
    spec = DomainSpec("IV", (5,))
    worst = 0.0
    for _ in range(100):
        xi = rng.normal(size=5) + 1j * rng.normal(size=5)
        ref = reference_norm_CK(spec, xi)
        worst = max(worst, abs(f_IV_norm(xi, "kobayashi")[0] - ref) / ref)
    report(capsys, 8, worst < 1e-12, f"kobayashi profile vs closed form, max relative error {worst:.2e}")
    assert worst < 1e-12


def test_criterion_09_transport(capsys):
    worst = 0.0
    for spec in (KINDS["I(2,3)"], KINDS["II(3)"], KINDS["III(4)"], KINDS["III(5)"]):
        k = spec.k
        zero = np.zeros(spec.shape)
        for i in range(200):
            Z = sample_point(spec, sample_seed(SEED, i, 1))
            V = sample_tangent(spec, sample_seed(SEED, i, 2))
            W = sample_tangent(spec, sample_seed(SEED, i, 3))
            aut = normalizer(spec, Z)
            U, X = differential(aut, V), differential(aut, W)
            for l in sorted({1, 2, 3, k, k + 1}):
                a, b = frak_B(l, Z, V), frak_B(l, zero, U)
                worst = max(worst, abs(a - b) / abs(b))
            for ij in ((1, 1), (k, 1), (2, 3)):
                a, b = cal_B(*ij, Z, V, W), cal_B(*ij, zero, U, X)
                scale = math.sqrt(frak_B(2 * ij[0], zero, U) * frak_B(2 * ij[1], zero, X))
                worst = max(worst, abs(a - b) / scale)
    report(capsys, 9, worst < 1e-9, f"transport of B_l and B_ij, max relative drift {worst:.2e}")
    assert worst < 1e-9


def test_criterion_10_isotropy(capsys):
    rng = np.random.default_rng(SEED + 10)
    t, k = 1.0, 3
    worst = 0.0
    cx = lambda *s: rng.normal(size=s) + 1j * rng.normal(size=s)
    for _ in range(500):
        # R_I: V -> A V B and, for square V, V -> A V' B
        V, A, B = cx(2, 3), random_unitary(2, rng), random_unitary(3, rng)
        f = minkowski_f(V, t, k)
        worst = max(worst, abs(minkowski_f(A @ V @ B, t, k) - f) / f)
        S, A2, B2 = cx(3, 3), random_unitary(3, rng), random_unitary(3, rng)
        f = minkowski_f(S, t, k)
        worst = max(worst, abs(minkowski_f(A2 @ S.T @ B2, t, k) - f) / f)
        # R_II and R_III: V -> U V U'
        U = random_unitary(3, rng)
        Vs = cx(3, 3)
        Vs = Vs + Vs.T
        f = minkowski_f(Vs, t, k)
        worst = max(worst, abs(minkowski_f(U @ Vs @ U.T, t, k) - f) / f)
        U4 = random_unitary(4, rng)
        Vk = cx(4, 4)
        Vk = Vk - Vk.T
        f = minkowski_f(Vk, t, k)
        worst = max(worst, abs(minkowski_f(U4 @ Vk @ U4.T, t, k) - f) / f)
        worst = max(worst, abs(minkowski_f(rm_III2(Vk), t, k) - f) / f)
        # R_IV: xi -> e^{i theta} xi D
        xi = cx(5)
        D = random_orthogonal(5, rng)
        th = rng.uniform(0, 2 * math.pi)
        for prof in ("paper-example", "kobayashi"):
            f = f_IV_norm(xi, prof)[0]
            worst = max(worst, abs(f_IV_norm(np.exp(1j * th) * xi @ D, prof)[0] - f) / f)
    report(capsys, 10, worst < 1e-10, f"isotropy invariance of origin norms over 500 draws, max drift {worst:.2e}")
    assert worst < 1e-10
