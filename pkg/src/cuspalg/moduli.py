"""Canonical primitives, global equivalence and moduli coordinates of simple cusps."""
from __future__ import annotations

import cmath
import functools
import math

import numpy as np

from .algebra import (
    CuspAlgebra,
    ModuliPoint,
    NotSimpleError,
    find_primitive,
)
from .jet import DEFAULT_TOL, Jet, compose, revert, sqrt_order2

EVEN_COEFF_TOL = 1e-10
UNIMODULAR_TOL = 1e-10


def normalize_primitive(pi: Jet, n: int, tol: float = DEFAULT_TOL) -> ModuliPoint:
    """Kill the even coefficients ``4, 6, .., 2n`` of a primitive and read off the odd ones.

    Each step ``chi <- chi - chihat(2k) chi^k`` clears the ``z^(2k)`` coefficient
    without touching lower ones.
    """
    if pi.truncation < 2 * n + 1:
        raise ValueError(f"truncation {pi.truncation} < 2n + 1 = {2 * n + 1}")
    if abs(pi[0]) > tol or abs(pi[1]) > tol or abs(pi[2] - 1) > tol:
        raise ValueError("normalize_primitive needs pi = z^2 + O(z^3)")
    chi = pi
    for k in range(2, n + 1):
        chi = chi - chi[2 * k] * chi ** k
    even = np.array([chi[2 * k] for k in range(2, n + 1)])
    scale = 1.0 + pi.norm()
    if len(even) and np.max(np.abs(even)) > EVEN_COEFF_TOL * scale:
        raise ArithmeticError(f"even coefficients did not vanish: {np.abs(even).max():.3g}")
    return ModuliPoint([chi[2 * j + 1] for j in range(1, n + 1)])


def canonical_form(A: CuspAlgebra) -> ModuliPoint:
    if not A.simple:
        raise NotSimpleError(f"contact {A.con}: canonical form needs a simple algebra")
    return normalize_primitive(find_primitive(A), A.cod - 1)


def _first_nonzero(a: np.ndarray, tol: float) -> int | None:
    nz = np.flatnonzero(np.abs(a) > tol)
    return int(nz[0]) if len(nz) else None


def _twist(a: np.ndarray, tau: complex) -> np.ndarray:
    powers = 2 * np.arange(1, len(a) + 1) - 1
    return tau ** powers * a


def twist(m: ModuliPoint, tau: complex) -> ModuliPoint:
    """The point ``(tau^(2j-1) alpha_j)_j``."""
    return ModuliPoint(_twist(m.as_array(), tau))


def _roots_of(w: complex, d: int) -> list[complex]:
    """The d unimodular solutions of ``tau^d = w`` for unimodular w, sorted by angle in [0, 2 pi)."""
    if d == 1:
        return [w]
    base = cmath.phase(w) / d
    angles = sorted((base + 2 * math.pi * k / d) % (2 * math.pi) for k in range(d))
    return [cmath.exp(1j * t) for t in angles]


def equivalent_cusps(a: ModuliPoint, b: ModuliPoint, tol: float = 1e-8) -> complex | None:
    """A unimodular tau with ``beta_j = tau^(2j-1) alpha_j`` for all j, or None."""
    if a.n != b.n:
        raise ValueError(f"moduli dimension mismatch: {a.n} vs {b.n}")
    alpha, beta = a.as_array(), b.as_array()
    j = _first_nonzero(alpha, tol)
    if j is None:
        return 1.0 + 0j if np.all(np.abs(beta) <= tol) else None
    if abs(abs(beta[j]) - abs(alpha[j])) > tol * (1 + abs(alpha[j])):
        return None
    d = 2 * (j + 1) - 1
    w = beta[j] / alpha[j]
    for tau in _roots_of(w / abs(w), d):
        if np.all(np.abs(_twist(alpha, tau) - beta) <= tol * (1 + np.abs(beta))):
            if abs(abs(tau) - 1) > UNIMODULAR_TOL:
                tau = tau / abs(tau)
            return tau
    return None


def _lex_cmp(tol: float):
    def cmp(u: np.ndarray, v: np.ndarray) -> int:
        for x, y in zip(u, v):
            for s, t in ((x.real, y.real), (x.imag, y.imag)):
                if abs(s - t) > tol:
                    return -1 if s < t else 1
        return 0
    return cmp


def moduli_coordinates(a: ModuliPoint, tol: float = 1e-9) -> ModuliPoint:
    """Orbit representative under the circle action ``alpha_j -> tau^(2j-1) alpha_j``.

    The first nonzero coordinate is made positive real; among the remaining
    finitely many twists the lexicographically smallest vector is chosen.
    """
    alpha = a.as_array()
    j = _first_nonzero(alpha, tol)
    if j is None:
        return a
    d = 2 * (j + 1) - 1
    w = abs(alpha[j]) / alpha[j]
    candidates = []
    for tau in _roots_of(w, d):
        v = _twist(alpha, tau)
        v[j] = abs(alpha[j])
        candidates.append(v)
    best = min(candidates, key=functools.cmp_to_key(_lex_cmp(tol)))
    return ModuliPoint(best)


def local_equivalence_map(pi1: Jet, pi2: Jet, tol: float = DEFAULT_TOL) -> Jet:
    """Germ phi with ``phi(0) = 0`` and ``pi2 o phi = pi1``, via square roots of the primitives."""
    chi1 = sqrt_order2(pi1, tol)
    chi2 = sqrt_order2(pi2, tol)
    phi = compose(revert(chi2, tol), chi1)
    residual = compose(pi2, phi) - pi1
    scale = 1.0 + max(pi1.norm(), pi2.norm())
    if residual.norm() > tol * scale:
        raise ArithmeticError(f"pi2 o phi - pi1 has size {residual.norm():.3g}")
    return phi
