"""Cusp algebras presented by a connection at the origin.

A :class:`CuspAlgebra` is the space of germs killed by an algebraic
connection, stored through a jet truncation N large enough that every
``z^k`` with ``k > ord`` is automatically a member.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functionals import (
    RANK_RTOL,
    Connection,
    _echelon,
    annihilator_basis,
    is_algebraic,
    null_space_rows,
    orthonormal_rows,
)
from .jet import DEFAULT_TOL, Jet, TruncationError

MEMBERSHIP_TOL = 1e-8


class CuspAlgebraError(ValueError):
    pass


class NotAlgebraicError(CuspAlgebraError):
    """The annihilator of the connection is not a unital algebra."""


class NotCuspError(CuspAlgebraError):
    """The algebra is not a cusp algebra (or lacks a property a procedure needs)."""


class NotSimpleError(NotCuspError):
    """The procedure needs contact 1."""


class MembershipError(CuspAlgebraError):
    """A jet expected to lie in the algebra does not."""


@dataclass(frozen=True)
class ModuliPoint:
    """Coefficients of the canonical primitive ``z^2 + a_1 z^3 + a_2 z^5 + ... + a_n z^(2n+1)``."""

    alphas: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))

    @property
    def n(self) -> int:
        return len(self.alphas)

    def as_array(self) -> np.ndarray:
        return np.array(self.alphas, dtype=complex)

    def primitive(self, N: int | None = None) -> Jet:
        """Jet of the canonical primitive at truncation N (default ``2n+5``)."""
        if N is None:
            N = default_truncation(self.n)
        if N < max(2, 2 * self.n + 1):
            raise TruncationError(f"truncation {N} too small for n = {self.n}")
        c = np.zeros(N + 1, complex)
        c[2] = 1.0
        for j, a in enumerate(self.alphas, start=1):
            c[2 * j + 1] = a
        return Jet(c)

    def allclose(self, other: ModuliPoint, tol: float = 1e-8) -> bool:
        return self.n == other.n and bool(
            np.all(np.abs(self.as_array() - other.as_array()) <= tol))


def default_truncation(n: int) -> int:
    """Working truncation for an algebra of codimension n+1."""
    return 2 * n + 5


class CuspAlgebra:
    """An algebra ``Gamma^perp`` of germs at 0, with its invariants.

    Use :func:`from_connection` or :func:`algebra_from_primitive` to build one.
    """

    def __init__(self, gamma: Connection, truncation: int, cod: int, ord: int, con: int):
        self.gamma = gamma
        self.truncation = truncation
        self.cod = cod
        self.ord = ord
        self.con = con
        self.jet_basis = tuple(annihilator_basis(gamma, truncation))

    @property
    def simple(self) -> bool:
        return self.con == 1

    @property
    def n(self) -> int:
        """Number of canonical moduli, ``cod - 1``."""
        return self.cod - 1

    def functional_rows(self, N: int | None = None) -> np.ndarray:
        return self.gamma.padded_rows(self.truncation if N is None else N)

    def basis_matrix(self) -> np.ndarray:
        return np.array([b.coeffs for b in self.jet_basis])

    def __contains__(self, f: Jet) -> bool:
        return membership(self, f)

    def __repr__(self):
        return (f"CuspAlgebra(cod={self.cod}, ord={self.ord}, con={self.con}, "
                f"N={self.truncation})")


def _contact(gamma: Connection, tol: float) -> int:
    n = 0
    while n + 1 <= gamma.truncation:
        e = np.zeros(gamma.truncation + 1, complex)
        e[n + 1] = 1.0
        if not gamma.contains(e, tol):
            break
        n += 1
    return n


def from_connection(gamma: Connection, N: int | None = None,
                    tol: float = MEMBERSHIP_TOL) -> CuspAlgebra:
    """Validate gamma as a cusp algebra connection and compute cod, ord, con."""
    dim = gamma.dim
    if N is None:
        N = max(2 * dim + 3, gamma.max_order())
    if N < 2 * dim + 3:
        raise TruncationError(f"truncation {N} below 2*dim + 3 = {2 * dim + 3}")
    if gamma.max_order() > N:
        raise TruncationError(f"connection has order {gamma.max_order()} > truncation {N}")
    if dim and np.any(np.abs(gamma.echelon[:, 0]) > tol):
        raise NotAlgebraicError("connection does not annihilate constants")
    if not is_algebraic(gamma, N, tol):
        raise NotAlgebraicError("annihilator is not closed under multiplication")
    con = _contact(gamma, tol)
    if con == 0:
        raise NotCuspError("contact 0: not a cusp algebra")
    return CuspAlgebra(gamma, N, cod=dim, ord=gamma.max_order(), con=con)


def membership(A: CuspAlgebra, f: Jet, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether f lies in A (exact for germs since ``z^(ord+1) O`` is in A)."""
    if f.truncation < A.ord:
        raise TruncationError(f"jet truncation {f.truncation} < ord(A) = {A.ord}")
    if A.cod == 0:
        return True
    vals = A.gamma.apply(f)
    return bool(np.max(np.abs(vals)) <= tol * (1.0 + np.linalg.norm(f.coeffs)))


def require_member(A: CuspAlgebra, f: Jet, what: str = "jet", tol: float = MEMBERSHIP_TOL):
    if not membership(A, f, tol):
        raise MembershipError(f"{what} is not in the algebra")


def find_primitive(A: CuspAlgebra, tol: float = DEFAULT_TOL) -> Jet:
    """Minimal-norm jet in A of the form ``z^2 + O(z^3)``."""
    if not A.simple:
        raise NotSimpleError(f"contact {A.con}: no primitive exists")
    Q = orthonormal_rows(A.basis_matrix())
    C = Q[:, :3].T
    rhs = np.array([0, 0, 1], complex)
    c, *_ = np.linalg.lstsq(C, rhs, rcond=None)
    if np.max(np.abs(C @ c - rhs)) > tol:
        raise NotSimpleError("no jet in the algebra has the form z^2 + ...")
    x = c @ Q
    x[:3] = rhs
    return Jet(x)


@dataclass(frozen=True)
class FiltrationProfile:
    dims: tuple[int, ...]
    n0: int


def filtration_profile(A: CuspAlgebra) -> FiltrationProfile:
    """Dimensions of ``E_n = A_n / A_(n+1)`` with ``A_n = A ∩ z^(2n) O``.

    Only levels whose quotient is fully visible at truncation N are reported.
    """
    if not A.simple:
        raise NotSimpleError(f"contact {A.con}: filtration needs a simple algebra")
    N = A.truncation
    rows = A.functional_rows()

    def dim_level(n: int) -> int:
        lo = 2 * n
        if lo > N:
            return 0
        _, piv = _echelon(rows[:, lo:], RANK_RTOL) if len(rows) else (None, [])
        return (N + 1 - lo) - len(piv)

    levels = (N - 1) // 2 + 1
    dims = tuple(dim_level(n) - dim_level(n + 1) for n in range(levels))
    ones = [i for i, d in enumerate(dims) if d == 1]
    return FiltrationProfile(dims, max(ones) if ones else -1)


@dataclass(frozen=True)
class Decomposition:
    """``f = sum_k coeffs[k] * pi**k + z^(2 n0 + 2) * remainder``."""

    coeffs: np.ndarray
    remainder: Jet

    def reconstruct(self, pi: Jet) -> Jet:
        N = pi.truncation
        out = Jet.zero(N)
        pk = Jet.constant(1.0, N)
        for c in self.coeffs:
            out = out + c * pk
            pk = pk * pi
        shift = 2 * (len(self.coeffs) - 1) + 2
        return out + self.remainder.truncate(N).shift_up(shift)


def _check_primitive(A: CuspAlgebra, pi: Jet, tol: float):
    if abs(pi[0]) > tol or abs(pi[1]) > tol or abs(pi[2] - 1) > tol:
        raise MembershipError("pi is not a primitive: need pi = z^2 + O(z^3)")
    require_member(A, pi, "pi")


def decompose(A: CuspAlgebra, f: Jet, pi: Jet, tol: float = DEFAULT_TOL) -> Decomposition:
    """Write ``f = p(pi) + z^(2 n0 + 2) g`` with ``deg p <= n0 = cod - 1``."""
    if not A.simple:
        raise NotSimpleError(f"contact {A.con}: decomposition needs a simple algebra")
    if f.truncation != pi.truncation:
        raise TruncationError(f"truncation mismatch: {f.truncation} vs {pi.truncation}")
    n0 = A.cod - 1
    if f.truncation < 2 * n0 + 2:
        raise TruncationError(f"truncation {f.truncation} < 2 n0 + 2 = {2 * n0 + 2}")
    _check_primitive(A, pi, tol)
    require_member(A, f, "f")
    N = f.truncation
    r = f
    pk = Jet.constant(1.0, N)
    c = np.zeros(n0 + 1, complex)
    for k in range(n0 + 1):
        # pi^k = z^(2k) + ..., so the z^(2k) coefficient of r fixes c_k
        c[k] = r[2 * k]
        r = r - c[k] * pk
        pk = pk * pi
    shift = 2 * n0 + 2
    scale = 1.0 + np.linalg.norm(f.coeffs)
    if np.max(np.abs(r.coeffs[:shift])) > MEMBERSHIP_TOL * scale:
        raise MembershipError("f does not decompose; it is not in the algebra")
    return Decomposition(c, r.shift_down(shift))


def algebra_from_primitive(m: ModuliPoint, N: int | None = None) -> CuspAlgebra:
    """The algebra ``A(alpha_1..alpha_n)`` generated by the canonical primitive and ``z^(2n+2) O``."""
    n = m.n
    if N is None:
        N = default_truncation(n)
    if N < 2 * n + 3:
        raise TruncationError(f"truncation {N} < 2n + 3 = {2 * n + 3}")
    pi = m.primitive(N)
    basis = []
    pk = Jet.constant(1.0, N)
    for _ in range(n + 1):
        basis.append(pk.coeffs)
        pk = pk * pi
    for j in range(2 * n + 2, N + 1):
        basis.append(Jet.monomial(j, N).coeffs)
    rows = null_space_rows(np.array(basis), N + 1)
    return from_connection(Connection.from_rows(rows, N), N)
