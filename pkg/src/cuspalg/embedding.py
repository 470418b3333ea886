"""Two-function embeddings of simple cusp algebras.

Functions are carried in closed form as ``p(z) * exp(q(z))`` so that zeros
can be removed exactly: dividing by ``(z - a) exp(h)`` deflates p and
subtracts h from q.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .algebra import (
    CuspAlgebra,
    MembershipError,
    NotSimpleError,
    membership,
    require_member,
)
from .functionals import spans_equal
from .jet import DEFAULT_TOL, Jet, exp_jet, mul, reciprocal
from .moduli import canonical_form
from .roots import certified_roots, polish, trim

ROOT_MARGIN = 1e-6


def _poly(c) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    return c if len(c) else np.zeros(1, complex)


@dataclass(frozen=True, eq=False)
class PolyExpFunction:
    """The entire function ``p(z) * exp(q(z))``; coefficient arrays are ascending."""

    p: np.ndarray
    q: np.ndarray = field(default_factory=lambda: np.zeros(1, complex))

    def __post_init__(self):
        object.__setattr__(self, "p", _poly(self.p))
        object.__setattr__(self, "q", _poly(self.q))

    def __call__(self, z):
        return P.polyval(z, self.p) * np.exp(P.polyval(z, self.q))

    def jet(self, N: int) -> Jet:
        p = Jet(self.p[:N + 1], N)
        q = Jet(self.q[:N + 1], N)
        return mul(p, exp_jet(q))

    def __mul__(self, other: PolyExpFunction) -> PolyExpFunction:
        return PolyExpFunction(P.polymul(self.p, other.p), P.polyadd(self.q, other.q))

    def __pow__(self, k: int) -> PolyExpFunction:
        return PolyExpFunction(P.polypow(self.p, k), k * self.q)

    def scaled(self, s: complex) -> PolyExpFunction:
        return PolyExpFunction(self.p * s, self.q)

    def times_z(self, k: int = 1) -> PolyExpFunction:
        return PolyExpFunction(np.concatenate([np.zeros(k, complex), self.p]), self.q)

    def roots(self) -> np.ndarray:
        """Zeros in the plane, i.e. the roots of p."""
        return certified_roots(self.p)

    def __repr__(self):
        return f"PolyExpFunction(p={trim(self.p)}, q={trim(self.q)})"


@dataclass(frozen=True, eq=False)
class EmbeddingPair:
    h1: PolyExpFunction
    h2: PolyExpFunction


def _psi(A: CuspAlgebra, alpha: complex) -> PolyExpFunction:
    # Constraints ordered by leading order are triangular in the new
    # coefficient of h: the pivot coefficient of psi is affine in h_m with slope -alpha.
    N = A.truncation
    rows = A.functional_rows()
    piv = A.gamma.pivots
    order = np.argsort(piv)
    h = np.zeros(A.ord + 1, complex)
    p = np.array([-alpha, 1.0], complex)

    def value(row):
        return row @ PolyExpFunction(p, h).jet(N).coeffs

    for i in order:
        m, row = piv[i], rows[i]
        h[m] = 0.0
        v0 = value(row)
        h[m] = 1.0
        v1 = value(row)
        h[m] = -v0 / (v1 - v0)
    return PolyExpFunction(p, h)


def solve_psi_alpha(A: CuspAlgebra, alpha: complex) -> PolyExpFunction:
    """A member ``(z - alpha) exp(h)`` of A with h polynomial, ``h(0) = 0``, deg h <= ord(A)."""
    if not 0 < abs(alpha) < 1:
        raise ValueError(f"need 0 < |alpha| < 1, got {alpha}")
    if not A.simple:
        raise NotSimpleError(f"contact {A.con}: need a simple algebra")
    psi = _psi(A, alpha)
    require_member(A, psi.jet(A.truncation), "psi_alpha")
    return psi


def invert_in_algebra(A: CuspAlgebra, f: Jet, tol: float = DEFAULT_TOL) -> Jet:
    """Reciprocal jet of a member of A that does not vanish at 0; checked to lie in A."""
    require_member(A, f, "f")
    if abs(f[0]) <= tol:
        raise ZeroDivisionError("f vanishes at the origin")
    r = reciprocal(f)
    require_member(A, r, "1/f")
    return r


def divide_by_psi(A: CuspAlgebra, f: Jet, psi: PolyExpFunction, alpha: complex) -> Jet:
    """Jet of ``f / psi``; the caller asserts ``f(alpha) = 0``.

    A membership failure of the quotient means that assertion was false.
    """
    require_member(A, f, "f")
    lead = psi.p[-1] if len(trim(psi.p)) == 2 else None
    if lead is None or abs(P.polyval(alpha, trim(psi.p))) > DEFAULT_TOL * abs(lead):
        raise ValueError("psi is not of the form c (z - alpha) exp(h)")
    out = f / psi.jet(f.truncation)
    if not membership(A, out):
        raise MembershipError("f / psi_alpha is not in the algebra; f(alpha) != 0")
    return out


def _deflate(p: np.ndarray, root: complex) -> np.ndarray:
    q, _ = P.polydiv(p, np.array([-root, 1.0], complex))
    return q


def zero_free_primitive(A: CuspAlgebra, margin: float = ROOT_MARGIN) -> PolyExpFunction:
    """A primitive of A with no zeros on the closed punctured disk of radius ``1 + margin``."""
    if not A.simple:
        raise NotSimpleError(f"contact {A.con}: need a simple algebra")
    N = A.truncation
    m = canonical_form(A)
    p = m.primitive(max(2, 2 * m.n + 1)).coeffs
    f = PolyExpFunction(p)
    cofactor = p[2:]
    inside = [r for r in certified_roots(cofactor) if abs(r) <= 1 + margin]
    for r in sorted(inside, key=abs):
        cof = trim(f.p[2:])
        r = polish(cof, r)
        psi = _psi(A, r)
        f = PolyExpFunction(np.concatenate([[0, 0], _deflate(cof, r)]),
                            P.polysub(f.q, psi.q))
    f = f.scaled(1.0 / f.p[2])
    j = f.jet(N)
    require_member(A, j, "zero-free primitive")
    left = certified_roots(trim(f.p[2:]))
    if np.any(np.abs(left) <= 1 + margin):
        raise ArithmeticError("roots remain in the closed disk after division")
    return f


def embedding_pair(A: CuspAlgebra) -> EmbeddingPair:
    """``h1`` a zero-free primitive and ``h2 = z h1^(n+1)``, checked to generate A."""
    n = A.cod - 1
    h1 = zero_free_primitive(A)
    h2 = (h1 ** (n + 1)).times_z()
    require_member(A, h2.jet(A.truncation), "h2")
    pair = EmbeddingPair(h1, h2)
    if not density_check(A, pair):
        raise ArithmeticError("polynomials in (h1, h2) do not span the algebra")
    return pair


def monomial_jets(pair: EmbeddingPair, N: int) -> list[Jet]:
    """Jets of ``h1^i h2^j`` whose lowest order is at most N."""
    j1, j2 = pair.h1.jet(N), pair.h2.jet(N)
    o1, o2 = j1.order(1e-14), j2.order(1e-14)
    o1 = o1 if o1 else 1
    o2 = o2 if o2 else 1
    out = []
    a = Jet.constant(1.0, N)
    for i in range(N // o1 + 1):
        b = a
        for j in range((N - i * o1) // o2 + 1):
            out.append(b)
            b = mul(b, j2)
        a = mul(a, j1)
    return out


def density_check(A: CuspAlgebra, pair: EmbeddingPair, tol: float = 1e-8) -> bool:
    """Whether polynomials in the pair span A modulo ``z^(N+1)``."""
    N = A.truncation
    mono = np.array([m.coeffs for m in monomial_jets(pair, N)])
    # rows differ wildly in scale once h1 carries a large exponential factor
    mono = mono / np.linalg.norm(mono, axis=1)[:, None]
    return spans_equal(mono, A.basis_matrix(), tol)


def render_cusp(pair: EmbeddingPair, radial_steps: int, angular_steps: int) -> np.ndarray:
    """Samples ``(h1(zeta), h2(zeta))`` on the polar grid ``r = i/radial_steps``, ``theta = 2 pi k/angular_steps``.

    Rows are ordered ring by ring; the result has shape ``(radial_steps * angular_steps, 2)``.
    """
    if radial_steps <= 0 or angular_steps <= 0:
        raise ValueError("step counts must be positive")
    r = np.arange(radial_steps) / radial_steps
    theta = 2 * np.pi * np.arange(angular_steps) / angular_steps
    zeta = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    return np.stack([pair.h1(zeta), pair.h2(zeta)], axis=1)
