"""Truncated complex power series at the origin.

A :class:`Jet` stores the Taylor coefficients ``c_0 .. c_N`` of a function
holomorphic near 0.  Every binary operation insists on equal truncation.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

DEFAULT_TOL = 1e-9


class TruncationError(ValueError):
    """Raised when jets of different truncation are combined."""


class Jet:
    """Taylor coefficients ``c_0 .. c_N`` of a germ at 0, truncated at degree N."""

    __slots__ = ("_c",)
    __array_ufunc__ = None

    def __init__(self, coeffs, truncation: int | None = None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if truncation is not None:
            if truncation < 0:
                raise ValueError("truncation must be nonnegative")
            if len(c) > truncation + 1:
                if np.any(c[truncation + 1:] != 0):
                    raise ValueError(
                        f"{len(c)} coefficients do not fit truncation {truncation}")
                c = c[:truncation + 1]
            else:
                c = np.concatenate([c, np.zeros(truncation + 1 - len(c), complex)])
        if len(c) == 0:
            raise ValueError("a jet needs at least one coefficient")
        c = c.copy()
        c.flags.writeable = False
        self._c = c

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, N: int) -> Jet:
        return cls(np.zeros(N + 1, complex))

    @classmethod
    def constant(cls, value, N: int) -> Jet:
        return cls([value], N)

    @classmethod
    def monomial(cls, k: int, N: int, coeff=1.0) -> Jet:
        """``coeff * z**k``; vanishes if k > N."""
        c = np.zeros(N + 1, complex)
        if k <= N:
            c[k] = coeff
        return cls(c)

    @classmethod
    def z(cls, N: int) -> Jet:
        return cls.monomial(1, N)

    # -- basic access -------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def truncation(self) -> int:
        return len(self._c) - 1

    def __getitem__(self, k):
        return self._c[k]

    def __len__(self):
        return len(self._c)

    def __repr__(self):
        return f"Jet({np.array2string(self._c, precision=6)}, N={self.truncation})"

    def order(self, tol: float = 0.0) -> int | None:
        """Index of the lowest coefficient with modulus > tol, or None."""
        nz = np.flatnonzero(np.abs(self._c) > tol)
        return int(nz[0]) if len(nz) else None

    def norm(self) -> float:
        return float(np.max(np.abs(self._c)))

    def allclose(self, other: Jet, tol: float = DEFAULT_TOL) -> bool:
        _check_same(self, other)
        return bool(np.max(np.abs(self._c - other._c)) <= tol)

    def truncate(self, N: int) -> Jet:
        """Re-truncate at N (padding with zeros if N is larger)."""
        if N <= self.truncation:
            return Jet(self._c[:N + 1])
        return Jet(self._c, N)

    def __call__(self, z):
        """Evaluate the polynomial part at z."""
        return np.polynomial.polynomial.polyval(z, self._c)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            _check_same(self, other)
            return Jet(self._c + other._c)
        c = self._c.copy()
        c[0] += other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return mul(self, other)
        return Jet(self._c * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return mul(self, reciprocal(other))
        return Jet(self._c / other)

    def __pow__(self, k: int):
        if k < 0:
            return reciprocal(self) ** (-k)
        out = Jet.constant(1.0, self.truncation)
        base = self
        while k:
            if k & 1:
                out = mul(out, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return out

    def shift_down(self, k: int) -> Jet:
        """Divide by z**k, dropping the (assumed vanishing) low coefficients.

        The result has truncation N - k.
        """
        if k > self.truncation:
            raise TruncationError(f"cannot divide a degree-{self.truncation} jet by z^{k}")
        return Jet(self._c[k:])

    def shift_up(self, k: int) -> Jet:
        """Multiply by z**k keeping truncation N."""
        c = np.zeros_like(self._c)
        if k <= self.truncation:
            c[k:] = self._c[:len(c) - k]
        return Jet(c)


def _check_same(a: Jet, b: Jet):
    if a.truncation != b.truncation:
        raise TruncationError(
            f"truncation mismatch: {a.truncation} vs {b.truncation}")


def mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at degree N."""
    _check_same(a, b)
    N = a.truncation
    return Jet(np.convolve(a.coeffs, b.coeffs)[:N + 1])


def compose(g: Jet, psi: Jet, tol: float = DEFAULT_TOL) -> Jet:
    """Jet of ``g o psi``; psi must vanish at the origin."""
    _check_same(g, psi)
    if abs(psi[0]) > tol:
        raise ValueError("compose needs psi(0) = 0")
    if psi[0] != 0:
        psi = psi - psi[0]
    N = g.truncation
    c = g.coeffs
    # Horner: g_N psi + g_{N-1}, times psi, ...
    acc = Jet.constant(c[N], N)
    for k in range(N - 1, -1, -1):
        acc = mul(acc, psi) + c[k]
    return acc


def revert(f: Jet, tol: float = DEFAULT_TOL) -> Jet:
    """Compositional inverse g with ``compose(f, g) = z`` through degree N."""
    N = f.truncation
    if abs(f[0]) > tol:
        raise ValueError("revert needs f(0) = 0")
    f = f - f[0]
    if N == 0:
        return Jet.zero(0)
    if abs(f[1]) <= tol:
        raise ValueError("revert needs f'(0) != 0 (germ not locally univalent)")
    g = np.zeros(N + 1, complex)
    g[1] = 1.0 / f[1]
    for k in range(2, N + 1):
        # g_k enters coefficient k of f o g only through f_1 * g_k
        ck = compose(f, Jet(g))[k]
        g[k] = -ck / f[1]
    return Jet(g)


def sqrt_order2(pi: Jet, tol: float = DEFAULT_TOL) -> Jet:
    """Square root chi of a jet with a double zero, chi'(0) principal.

    Coefficients of pi beyond degree N are taken to be zero, so chi_N is the
    value for the polynomial pi; ``chi * chi == pi`` holds through degree N.
    """
    N = pi.truncation
    if N < 2:
        raise ValueError("sqrt_order2 needs truncation >= 2")
    if abs(pi[0]) > tol or abs(pi[1]) > tol or abs(pi[2]) <= tol:
        raise ValueError("sqrt_order2 needs pi(0) = pi'(0) = 0 and pi''(0) != 0")
    u = np.zeros(N, complex)
    u[:N - 1] = pi.coeffs[2:]
    s = np.zeros(N, complex)
    s[0] = cmath.sqrt(u[0])
    for k in range(1, N):
        s[k] = (u[k] - np.dot(s[1:k], s[k - 1:0:-1])) / (2 * s[0])
    return Jet(np.concatenate([[0.0], s]))


def exp_jet(q: Jet) -> Jet:
    """Jet of ``exp(q)`` from the recurrence ``E' = q' E``."""
    N = q.truncation
    qc = q.coeffs
    e = np.zeros(N + 1, complex)
    e[0] = cmath.exp(qc[0])
    j = np.arange(1, N + 1)
    for k in range(1, N + 1):
        e[k] = np.dot(j[:k] * qc[1:k + 1], e[k - 1::-1]) / k
    return Jet(e)


def reciprocal(f: Jet, tol: float = 0.0) -> Jet:
    """Jet of ``1/f``; needs f(0) != 0."""
    if abs(f[0]) <= tol:
        raise ZeroDivisionError("reciprocal needs f(0) != 0")
    N = f.truncation
    fc = f.coeffs
    r = np.zeros(N + 1, complex)
    r[0] = 1.0 / fc[0]
    for k in range(1, N + 1):
        r[k] = -np.dot(fc[1:k + 1], r[k - 1::-1]) / fc[0]
    return Jet(r)


def from_derivatives(derivs) -> Jet:
    """Jet from raw derivatives f^(k)(0)."""
    d = np.asarray(derivs, dtype=complex)
    return Jet(d / factorials(len(d) - 1))


def to_derivatives(f: Jet) -> np.ndarray:
    """Raw derivatives f^(k)(0), k = 0..N."""
    return f.coeffs * factorials(f.truncation)


def factorials(N: int) -> np.ndarray:
    """``[0!, 1!, ..., N!]`` as floats."""
    return np.array([float(math.factorial(k)) for k in range(N + 1)])
