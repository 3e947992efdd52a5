"""Acceptance criteria, one test each; every test records a PASS/FAIL line
that is echoed in the terminal summary."""

import itertools
import math
import time

import numpy as np
import pytest

from qcube.algebra import bell_projector, psd_margin, schatten_norm
from qcube.calculus import conditional_variance, derivative, influence, v_functional, variance
from qcube.classical import influence as classical_influence
from qcube.classical import majority, random_table, v_i
from qcube.classical import variance as classical_variance
from qcube.constants import (
    g1_integral_oracle,
    g1_inverse_sqrt_integral,
    incomplete_beta,
    named_constant,
    time_integral,
    time_integral_closed,
)
from qcube.generators import GeneratorSpec, classical_embed, derive_seed, generate
from qcube.suite import CLASSICAL_DEFAULT, QUANTUM_DEFAULT, SuiteConfig, run_suite

from conftest import ACCEPTANCE

SEED = 42


def verdict(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def test_criterion_1_bell_sharpness():
    start = time.perf_counter()
    P = bell_projector(2)
    grad_sq = derivative(P, {0}).sq_abs()
    margin = psd_margin(3.0 * conditional_variance(P, 0) - grad_sq)
    top = float(np.max(np.linalg.eigvalsh(grad_sq.matrix)))
    elapsed = time.perf_counter() - start
    ok = abs(margin) <= 1e-12 and abs(top - 9 / 16) <= 1e-12 and elapsed < 1.0
    verdict(1, "Bell sharpness", ok, f"margin={margin:.2e}, top eigenvalue={top:.15f}, {elapsed:.3f}s")


def test_criterion_2_g1_integral():
    value = g1_inverse_sqrt_integral()
    oracle = g1_integral_oracle()
    ok = abs(value - 2.0943951) <= 1e-6 and abs(value - oracle) <= 1e-6 and abs(value - 2 * math.pi / 3) <= 1e-10
    verdict(2, "integral of G1^(-1/2)", ok, f"quadrature={value:.12f}, substitution oracle={oracle:.12f}")


def test_criterion_3_beta_identity():
    worst = 0.0
    for p in (1.0, 1.5, 2.0):
        for t in (0.2, 1.0, 3.0):
            worst = max(worst, abs(time_integral(p, t) - time_integral_closed(p, t)))
    beta = incomplete_beta(0.75, 0.5, 0.5)
    arcsin = 2.0 * math.asin(math.sqrt(0.75))
    ok = worst <= 1e-6 and abs(beta - arcsin) <= 1e-8 and abs(beta - 2 * math.pi / 3) <= 1e-8
    verdict(3, "incomplete Beta time integral", ok, f"worst gap={worst:.2e}, B(3/4;1/2,1/2)-arcsin={beta - arcsin:.1e}")


def test_criterion_4_default_suite():
    start = time.perf_counter()
    config = SuiteConfig(laws=QUANTUM_DEFAULT, n_values=(1, 2, 3, 4), trials=100, seed=SEED).validate()
    rep = run_suite(config)
    elapsed = time.perf_counter() - start
    records = sum(s.records for s in rep.laws.values())
    ok = rep.failures == 0 and elapsed < 600
    verdict(4, "default suite Q1-Q20", ok, f"{records} records, {rep.failures} failures, {rep.skipped} skipped, {elapsed:.0f}s")


def test_criterion_5_oracle_equivalence():
    worst_q = 0.0
    for idx in range(20):
        n = 1 + idx % 4
        A = generate(GeneratorSpec("random_hermitian", n, derive_seed(SEED, 5, idx)))
        for size in range(1, min(3, n) + 1):
            for J in itertools.combinations(range(n), size):
                gap = abs(v_functional(A, J, "quadrature") - v_functional(A, J))
                worst_q = max(worst_q, gap)
    worst_c = 0.0
    rng = np.random.default_rng(derive_seed(SEED, 5))
    for idx in range(20):
        n = 1 + idx % 4
        f = random_table(rng, n, boolean=bool(idx % 2))
        for i in range(n):
            worst_c = max(worst_c, abs(v_i(f, i, "quadrature") - v_i(f, i)))
    ok = worst_q <= 1e-6 and worst_c <= 1e-6
    verdict(5, "V fourier vs quadrature", ok, f"quantum worst={worst_q:.1e}, classical worst={worst_c:.1e}")


def test_criterion_6_degenerate_identities():
    worst_sum = 0.0
    for idx in range(20):
        n = 1 + idx % 4
        A = generate(GeneratorSpec("random_hermitian", n, derive_seed(SEED, 6, idx)))
        worst_sum = max(worst_sum, abs(sum(v_functional(A, {j}) for j in range(n)) - variance(A)))
    worst_unit = 0.0
    for idx in range(50):
        n = 1 + idx % 4
        A = generate(GeneratorSpec("random_quantum_boolean", n, derive_seed(SEED, 60, idx)))
        worst_unit = max(worst_unit, abs(variance(A) - schatten_norm(A - A.trace(), 1)))
    c1 = named_constant("C1_main", p=2)
    ok = worst_sum <= 1e-10 and worst_unit <= 1e-10 and abs(c1 - 1) <= 1e-10
    verdict(6, "degenerate and extremal identities", ok,
            f"sum V_j - Var={worst_sum:.1e}, Var - ||A-tau A||_1={worst_unit:.1e}, C1_main(2)={c1!r}")


def test_criterion_7_appendix_suite():
    config = SuiteConfig(laws=CLASSICAL_DEFAULT, n_values=(1, 2, 3, 4), trials=200, seed=SEED).validate()
    rep = run_suite(config)
    maj = majority(3)
    v1 = v_i(maj, 0)
    worst = 0.0
    rng = np.random.default_rng(derive_seed(SEED, 7))
    for n in (1, 2, 3, 4):
        for _ in range(50):
            f = random_table(rng, n)
            worst = max(worst, abs(sum(v_i(f, i) for i in range(n)) - classical_variance(f)))
    ok = rep.failures == 0 and abs(v1 - 1 / 3) <= 1e-12 and worst <= 1e-12
    verdict(7, "appendix laws A1-A6", ok,
            f"{rep.failures} failures, {rep.skipped} skipped, Maj3 V_1={v1:.15f}, sum V_i - Var={worst:.1e}")


def test_criterion_8_embedding_consistency():
    rng = np.random.default_rng(derive_seed(SEED, 8))
    worst = 0.0
    for idx in range(50):
        n = 1 + idx % 4
        f = random_table(rng, n, boolean=bool(idx % 2))
        A = classical_embed(f)
        worst = max(worst, abs(variance(A) - classical_variance(f)))
        for i in range(n):
            for p in (1.0, 2.0):
                worst = max(worst, abs(influence(A, {i}, p) - classical_influence(f, i, p)))
    verdict(8, "classical embedding", worst <= 1e-9, f"worst gap={worst:.1e}")
