"""Local functionals at the origin and connections built from them.

A local functional acts on jets by ``f -> sum_k t_k * fhat(k)`` where
``fhat(k)`` is the k-th Taylor coefficient.  The derivative form
``sum_j a_j f^(j)(0)`` corresponds to ``t_j = a_j * j!``.

Only functionals supported at the origin are representable.
"""
from __future__ import annotations

import numpy as np

from .jet import DEFAULT_TOL, Jet, factorials, mul

RANK_RTOL = 1e-8


class LocalFunctional:
    """``f -> sum_k t_k fhat(k)`` for a jet f at the origin."""

    __slots__ = ("_t",)
    __array_ufunc__ = None

    def __init__(self, taylor_coeffs, truncation: int | None = None):
        self._t = Jet(taylor_coeffs, truncation).coeffs

    @classmethod
    def from_derivative_coeffs(cls, a, truncation: int | None = None) -> LocalFunctional:
        """Build from ``sum_j a_j f^(j)(0)``."""
        a = Jet(a, truncation).coeffs
        return cls(a * factorials(len(a) - 1))

    @classmethod
    def delta(cls, j: int, N: int) -> LocalFunctional:
        """The derivative functional ``f -> f^(j)(0)``."""
        t = np.zeros(N + 1, complex)
        t[j] = factorials(j)[-1]
        return cls(t)

    @classmethod
    def coefficient(cls, j: int, N: int) -> LocalFunctional:
        """``f -> fhat(j)``."""
        t = np.zeros(N + 1, complex)
        t[j] = 1.0
        return cls(t)

    @property
    def taylor_coeffs(self) -> np.ndarray:
        return self._t

    @property
    def derivative_coeffs(self) -> np.ndarray:
        return self._t / factorials(self.truncation)

    @property
    def truncation(self) -> int:
        return len(self._t) - 1

    def order(self, tol: float = 0.0) -> int | None:
        """Highest Taylor index with a nonzero coefficient."""
        nz = np.flatnonzero(np.abs(self._t) > tol)
        return int(nz[-1]) if len(nz) else None

    def padded(self, N: int) -> np.ndarray:
        """Coefficient vector of length N+1; fails if the order exceeds N."""
        k = self.order()
        if k is not None and k > N:
            raise ValueError(f"functional of order {k} does not act on degree-{N} jets")
        out = np.zeros(N + 1, complex)
        m = min(N, self.truncation) + 1
        out[:m] = self._t[:m]
        return out

    def __call__(self, f: Jet) -> complex:
        return complex(np.dot(self.padded(f.truncation), f.coeffs))

    def __add__(self, other: LocalFunctional) -> LocalFunctional:
        return LocalFunctional(self._t + other._t)

    def __mul__(self, s) -> LocalFunctional:
        return LocalFunctional(self._t * s)

    __rmul__ = __mul__

    def __repr__(self):
        return f"LocalFunctional({np.array2string(self._t, precision=6)})"


def delta(j: int, N: int) -> LocalFunctional:
    return LocalFunctional.delta(j, N)


def _echelon(rows: np.ndarray, rtol: float = RANK_RTOL):
    """Reduced row echelon form with columns scanned from the highest index down.

    Returns ``(E, pivots)`` where row i of E has a unit entry at ``pivots[i]``,
    zeros at every other pivot column and at all columns above its pivot.
    Pivots are strictly decreasing.
    """
    A = np.array(rows, dtype=complex, copy=True)
    if A.ndim != 2 or A.shape[0] == 0:
        ncols = A.shape[1] if A.ndim == 2 else 0
        return np.zeros((0, ncols), complex), []
    nrows, ncols = A.shape
    scale = np.max(np.linalg.norm(A, axis=1))
    if scale == 0:
        return np.zeros((0, ncols), complex), []
    tol = rtol * scale
    r = 0
    pivots = []
    for c in range(ncols - 1, -1, -1):
        if r == nrows:
            break
        p = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[p, c]) <= tol:
            A[r:, c] = 0
            continue
        if p != r:
            A[[p, r]] = A[[r, p]]
        A[r] /= A[r, c]
        others = np.arange(nrows) != r
        A[others] -= np.outer(A[others, c], A[r])
        A[others, c] = 0
        pivots.append(c)
        r += 1
    E = A[:r]
    for i, c in enumerate(pivots):
        E[i, c + 1:] = 0
        E[i, c] = 1.0
    return E, pivots


def null_space_rows(rows: np.ndarray, ncols: int, rtol: float = RANK_RTOL) -> np.ndarray:
    """Basis of ``{x : rows @ x = 0}``, one row per free column (ascending)."""
    E, pivots = _echelon(np.reshape(rows, (-1, ncols)), rtol)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = np.zeros((len(free), ncols), complex)
    for i, c in enumerate(free):
        out[i, c] = 1.0
        for row, p in zip(E, pivots):
            out[i, p] = -row[c]
    return out


def orthonormal_rows(rows: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the row space, rank cut at rtol * largest singular value."""
    rows = np.atleast_2d(np.asarray(rows, dtype=complex))
    if rows.shape[0] == 0:
        return rows
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if len(s) == 0 or s[0] == 0:
        return np.zeros((0, rows.shape[1]), complex)
    rank = int(np.sum(s > rtol * s[0]))
    return vh[:rank]


def residual_off_span(vectors: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Norm of each (unit-normalized) vector after projecting off ``span(basis)``."""
    v = np.atleast_2d(np.asarray(vectors, dtype=complex))
    norms = np.linalg.norm(v, axis=1)
    v = v[norms > 0] / norms[norms > 0, None]
    Q = orthonormal_rows(basis) if len(basis) else np.zeros((0, v.shape[1]), complex)
    proj = (v @ Q.conj().T) @ Q if len(Q) else np.zeros_like(v)
    return np.linalg.norm(v - proj, axis=1)


def spans_equal(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """Mutual-residual test for ``span(a) == span(b)``."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    b = np.atleast_2d(np.asarray(b, dtype=complex))
    if a.shape[0] == 0 or b.shape[0] == 0:
        return orthonormal_rows(a).shape[0] == orthonormal_rows(b).shape[0] == 0
    ra = residual_off_span(a, b)
    rb = residual_off_span(b, a)
    return bool(np.all(ra <= tol) and np.all(rb <= tol))


class Connection:
    """Finite-dimensional span of local functionals at the origin.

    The reduced echelon basis is computed on construction.  Its rows are
    ordered by leading Taylor order, highest first, with unit pivots.
    """

    def __init__(self, functionals=(), truncation: int | None = None,
                 rtol: float = RANK_RTOL):
        fs = [f if isinstance(f, LocalFunctional) else LocalFunctional(f) for f in functionals]
        if truncation is None:
            if not fs:
                raise ValueError("an empty connection needs an explicit truncation")
            truncation = fs[0].truncation
        for f in fs:
            if f.truncation != truncation:
                raise ValueError(
                    f"functional truncation {f.truncation} != connection truncation {truncation}")
        self._functionals = tuple(fs)
        self._N = truncation
        rows = np.array([f.taylor_coeffs for f in fs]).reshape(len(fs), truncation + 1)
        self._rows, self._pivots = _echelon(rows, rtol)
        self._rows.flags.writeable = False

    @classmethod
    def from_rows(cls, rows, truncation: int | None = None) -> Connection:
        rows = [LocalFunctional(r) for r in np.atleast_2d(rows)] if len(rows) else []
        return cls(rows, truncation)

    @property
    def truncation(self) -> int:
        return self._N

    @property
    def functionals(self) -> tuple[LocalFunctional, ...]:
        return self._functionals

    @property
    def echelon(self) -> np.ndarray:
        """Echelon rows, one per dimension, leading order decreasing."""
        return self._rows

    @property
    def pivots(self) -> list[int]:
        return list(self._pivots)

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def __len__(self):
        return self.dim

    def echelon_functionals(self) -> list[LocalFunctional]:
        return [LocalFunctional(r) for r in self._rows]

    def max_order(self) -> int:
        """Largest leading Taylor order, or -1 for the zero connection."""
        return self._pivots[0] if self._pivots else -1

    def padded_rows(self, N: int) -> np.ndarray:
        """Echelon rows widened (or narrowed) to act on degree-N jets."""
        if self.max_order() > N:
            raise ValueError(
                f"connection of order {self.max_order()} does not act on degree-{N} jets")
        out = np.zeros((self.dim, N + 1), complex)
        m = min(N, self._N) + 1
        out[:, :m] = self._rows[:, :m]
        return out

    def reduce(self, t) -> np.ndarray:
        """Remainder of a coefficient vector after elimination against the echelon rows."""
        v = np.array(LocalFunctional(t, self._N).taylor_coeffs)
        for row, p in zip(self._rows, self._pivots):
            v = v - v[p] * row
        return v

    def contains(self, functional, tol: float = 1e-8) -> bool:
        t = functional.taylor_coeffs if isinstance(functional, LocalFunctional) else functional
        t = LocalFunctional(t, self._N).taylor_coeffs
        scale = max(1.0, float(np.linalg.norm(t)))
        return bool(np.linalg.norm(self.reduce(t)) <= tol * scale)

    def apply(self, f: Jet) -> np.ndarray:
        """Values of every echelon functional on f."""
        return self.padded_rows(f.truncation) @ f.coeffs

    def same_span(self, other: Connection, tol: float = 1e-8) -> bool:
        N = max(self._N, other._N)
        return spans_equal(self.padded_rows(N), other.padded_rows(N), tol)

    def __repr__(self):
        return f"Connection(dim={self.dim}, pivots={self._pivots}, N={self._N})"


def echelonize(gamma: Connection) -> Connection:
    """Connection spanned by the echelon rows of gamma."""
    return Connection.from_rows(gamma.echelon, gamma.truncation)


def annihilator_basis(gamma: Connection, N: int) -> list[Jet]:
    """Basis of the degree-N jets killed by every functional of gamma.

    One jet per non-pivot Taylor order ``c``: it has coefficient 1 at ``c``
    and is corrected only at pivot orders.
    """
    rows = gamma.padded_rows(N)
    return [Jet(v) for v in null_space_rows(rows, N + 1)]


def is_algebraic(gamma: Connection, N: int | None = None, tol: float = 1e-8) -> bool:
    """Whether the jets annihilated by gamma (together with ``z^(ord+1) O``) form a unital algebra."""
    if N is None:
        N = gamma.truncation
    if gamma.max_order() > N:
        raise ValueError(
            f"connection of order {gamma.max_order()} does not act on degree-{N} jets")
    if gamma.dim == 0:
        return True
    rows = gamma.echelon
    if np.any(np.abs(rows[:, 0]) > tol):
        return False
    M = gamma.max_order()
    R = gamma.padded_rows(M)
    basis = annihilator_basis(gamma, M)
    for i, a in enumerate(basis):
        for b in basis[i:]:
            ab = mul(a, b)
            scale = 1.0 + a.norm() * b.norm()
            if np.max(np.abs(R @ ab.coeffs)) > tol * scale:
                return False
    return True


def composition_matrix(psi: Jet) -> np.ndarray:
    """Matrix whose k-th column is the jet of ``psi**k``."""
    N = psi.truncation
    M = np.zeros((N + 1, N + 1), complex)
    p = Jet.constant(1.0, N)
    for k in range(N + 1):
        M[:, k] = p.coeffs
        p = mul(p, psi)
    return M


def _check_germ(psi: Jet, tol: float):
    if psi.truncation < 1 or abs(psi[0]) > tol or abs(psi[1]) <= tol:
        raise ValueError("psi must satisfy psi(0) = 0 and psi'(0) != 0")


def pushforward(lam: LocalFunctional, psi: Jet, tol: float = DEFAULT_TOL) -> LocalFunctional:
    """The functional ``g -> lam(g o psi)``."""
    if lam.truncation != psi.truncation:
        raise ValueError(
            f"truncation mismatch: functional {lam.truncation} vs germ {psi.truncation}")
    _check_germ(psi, tol)
    psi = psi - psi[0]
    return LocalFunctional(lam.taylor_coeffs @ composition_matrix(psi))


def pushforward_connection(gamma: Connection, psi: Jet, tol: float = DEFAULT_TOL) -> Connection:
    if gamma.truncation != psi.truncation:
        raise ValueError(
            f"truncation mismatch: connection {gamma.truncation} vs germ {psi.truncation}")
    _check_germ(psi, tol)
    psi = psi - psi[0]
    M = composition_matrix(psi)
    return Connection.from_rows(gamma.echelon @ M if gamma.dim else [], gamma.truncation)
