"""Acceptance criteria, each reported as one pass/fail line."""
import hashlib
import io
import subprocess
import sys
import time

import numpy as np

from cuspalg.algebra import (
    ModuliPoint,
    algebra_from_primitive,
    decompose,
    find_primitive,
    from_connection,
)
from cuspalg.cli import write_csv, write_svg
from cuspalg.embedding import density_check, embedding_pair, render_cusp
from cuspalg.functionals import (
    Connection,
    LocalFunctional,
    delta,
    is_algebraic,
    pushforward,
    pushforward_connection,
)
from cuspalg.jet import Jet, compose
from cuspalg.moduli import (
    canonical_form,
    equivalent_cusps,
    local_equivalence_map,
    normalize_primitive,
    twist,
)
from cuspalg.roots import backward_residual, certified_roots

from . import conftest
from .conftest import random_disk, random_unimodular


def report(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} ({detail})"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_member(A, rng):
    B = A.basis_matrix()
    return Jet(random_disk(rng, len(B)) @ B)


def test_invariants_of_canonical_algebras():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    bad = 0
    for n in range(7):
        for _ in range(100):
            m = ModuliPoint(random_disk(rng, n))
            A = from_connection(algebra_from_primitive(m).gamma)
            bad += (A.cod, A.ord, A.con) != (n + 1, 2 * n + 1, 1)
    dt = time.perf_counter() - t0
    report(1, "cod/ord/con identity", bad == 0 and dt < 5, f"{bad} mismatches of 700, {dt:.2f}s")


C_VECTOR_SCRIPT = """
import hashlib, numpy as np
from cuspalg.algebra import ModuliPoint, algebra_from_primitive, decompose
m = ModuliPoint([0.3 - 0.2j, 0.1j, -0.4])
A = algebra_from_primitive(m)
pi = m.primitive(A.truncation)
f = 1 + 2 * pi + 0.5 * pi ** 3 + (0.25 + 0.5j) * pi ** 2
print(hashlib.sha256(decompose(A, f, pi).coeffs.tobytes()).hexdigest())
"""


def test_decomposition_roundtrip():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(0, 6))
        A = algebra_from_primitive(ModuliPoint(random_disk(rng, n)))
        pi = find_primitive(A)
        f = random_member(A, rng)
        dec = decompose(A, f, pi)
        worst = max(worst, float(np.max(np.abs(dec.reconstruct(pi).coeffs - f.coeffs))))
    dt = time.perf_counter() - t0
    digests = {subprocess.run([sys.executable, "-c", C_VECTOR_SCRIPT], capture_output=True,
                              text=True, check=True).stdout.strip() for _ in range(2)}
    ns = {}
    exec(C_VECTOR_SCRIPT.replace("print(", "digest = ("), ns)
    digests.add(ns["digest"])
    ok = worst <= 1e-9 and dt < 5 and len(digests) == 1
    report(2, "decomposition roundtrip", ok,
           f"max error {worst:.1e}, {dt:.2f}s, {len(digests)} distinct c-vector digests over 3 runs")


def test_primitive_independence():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 7))
        m = ModuliPoint(random_disk(rng, n))
        A = algebra_from_primitive(m)
        N = A.truncation
        pi = find_primitive(A)
        results = []
        for _ in range(50):
            f = pi
            for k in range(2, n + 1):
                f = f + complex(random_disk(rng, 1)[0]) * pi ** k
            tail = np.zeros(N + 1, complex)
            tail[2 * n + 2:] = random_disk(rng, N - 2 * n - 1)
            results.append(normalize_primitive(f + Jet(tail), n).as_array())
        results = np.array(results)
        worst = max(worst, float(np.max(np.abs(results - results[0]))))
    report(3, "normalized primitives agree", worst <= 1e-8, f"max spread {worst:.1e}")


def test_rotation_against_pushforward():
    rng = np.random.default_rng(4)
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = ModuliPoint(random_disk(rng, n))
        tau = random_unimodular(rng)
        A = algebra_from_primitive(m)
        # g lies in the transported algebra iff g(conj(tau) z) lies in A
        psi = Jet.monomial(1, A.truncation, np.conj(tau))
        B = from_connection(pushforward_connection(A.gamma, psi), A.truncation)
        b = canonical_form(B)
        found = equivalent_cusps(m, b)
        if not b.allclose(twist(m, tau), 1e-8) or found is None or not twist(m, found).allclose(b, 1e-8):
            mismatches += 1
    for _ in range(100):
        n = int(rng.integers(1, 7))
        a = random_disk(rng, n)
        b = twist(ModuliPoint(a), random_unimodular(rng)).as_array()
        j = int(rng.integers(0, n))
        b[j] *= 1 + rng.uniform(1e-3, 0.5)
        if abs(a[j]) < 1e-3:
            b[j] += 1e-2
        if equivalent_cusps(ModuliPoint(a), ModuliPoint(b)) is not None:
            mismatches += 1
    report(4, "rotations match pushforward, inequivalent pairs rejected", mismatches == 0,
           f"{mismatches} mismatches of 300")


def test_top_coefficient():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        for n in range(1, 11):
            a = random_disk(rng, n + 1)
            a[n] = (0.5 + rng.uniform()) * random_unimodular(rng)
            psi = random_disk(rng, n + 1)
            psi[0] = 0
            psi[1] = (0.2 + rng.uniform()) * random_unimodular(rng)
            out = pushforward(LocalFunctional.from_derivative_coeffs(a), Jet(psi))
            expected = a[n] * psi[1] ** n
            worst = max(worst, abs(out.derivative_coeffs[n] - expected) / abs(expected))
    report(5, "top derivative coefficient", worst <= 1e-12, f"max relative error {worst:.1e}")


def test_embedding():
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    failures = 0
    worst_residual = 0.0
    min_modulus = np.inf
    for n in range(6):
        for _ in range(100):
            A = algebra_from_primitive(ModuliPoint(random_disk(rng, n)))
            pair = embedding_pair(A)
            failures += not density_check(A, pair)
            cof = pair.h1.p[2:]
            roots = certified_roots(cof)
            if len(roots):
                min_modulus = min(min_modulus, float(np.min(np.abs(roots))))
                worst_residual = max(worst_residual, max(backward_residual(cof, r) for r in roots))
    neil = embedding_pair(from_connection(Connection([delta(1, 5)]), 5))
    neil_ok = (np.array_equal(neil.h1.p, [0, 0, 1]) and np.array_equal(neil.h2.p, [0, 0, 0, 1])
               and not neil.h1.q.any() and not neil.h2.q.any())
    dt = time.perf_counter() - t0
    ok = failures == 0 and neil_ok and min_modulus > 1 + 1e-6 and worst_residual <= 1e-12 and dt < 30
    report(6, "two-function embedding", ok,
           f"{failures} density failures of 600, Neil exact={neil_ok}, min root modulus "
           f"{min_modulus:.4f}, max root residual {worst_residual:.1e}, {dt:.2f}s")


def test_local_equivalence_residual():
    rng = np.random.default_rng(7)
    N = 15
    worst = 0.0
    for _ in range(100):
        c1, c2 = random_disk(rng, (2, N + 1))
        c1[:3], c2[:3] = [0, 0, 1], [0, 0, 1]
        pi1, pi2 = Jet(c1), Jet(c2)
        phi = local_equivalence_map(pi1, pi2)
        worst = max(worst, (compose(pi2, phi) - pi1).norm())
    report(7, "local equivalence map", worst <= 1e-9, f"max residual {worst:.1e} at N = {N}")


def test_algebraicity_detector():
    N = 5
    got = (is_algebraic(Connection([delta(1, N)])),
           is_algebraic(Connection([delta(2, N)])),
           is_algebraic(Connection([delta(1, N), delta(2, N)])))
    report(8, "algebraicity detector", got == (True, False, True), f"got {got}")


def _render_bytes():
    pair = embedding_pair(from_connection(Connection([delta(1, 5)]), 5))
    samples = render_cusp(pair, 64, 256)
    c, s = io.StringIO(), io.StringIO()
    write_csv(samples, c)
    write_svg(samples, 64, 256, s)
    return samples, c.getvalue().encode(), s.getvalue().encode()


RENDER_SCRIPT = """
import hashlib
from tests.test_acceptance import _render_bytes
_, c, s = _render_bytes()
print(hashlib.sha256(c).hexdigest(), hashlib.sha256(s).hexdigest())
"""


def test_rendering_reproducible():
    samples, c1, s1 = _render_bytes()
    _, c2, s2 = _render_bytes()
    z, w = samples[:, 0], samples[:, 1]
    worst = float(np.max(np.abs(z ** 3 - w ** 2)))
    here = f"{hashlib.sha256(c1).hexdigest()} {hashlib.sha256(s1).hexdigest()}"
    other = subprocess.run([sys.executable, "-c", RENDER_SCRIPT], capture_output=True, text=True,
                           check=True, cwd=conftest.ROOT).stdout.strip()
    identical = c1 == c2 and s1 == s2 and here == other
    ok = len(samples) == 16384 and worst <= 1e-12 and identical
    report(9, "cusp rendering", ok,
           f"{len(samples)} samples, max |z^3 - w^2| {worst:.1e}, byte-identical={identical}")
