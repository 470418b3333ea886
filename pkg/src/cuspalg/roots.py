"""Certified roots of complex polynomials: companion-matrix eigenvalues, Newton polish, residual check."""
from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

RESIDUAL_TOL = 1e-12


class RootFindingError(ArithmeticError):
    pass


def trim(coeffs, rtol: float = 1e-14) -> np.ndarray:
    """Drop leading (highest-degree) coefficients below rtol * max modulus."""
    c = np.asarray(coeffs, dtype=complex)
    if not np.any(c):
        return c[:1]
    big = np.max(np.abs(c))
    keep = np.flatnonzero(np.abs(c) > rtol * big)
    return c[:keep[-1] + 1]


def backward_residual(coeffs: np.ndarray, z: complex) -> float:
    """``|p(z)| / sum_k |c_k| |z|^k``, the relative backward error of a root."""
    num = abs(P.polyval(z, coeffs))
    den = P.polyval(abs(z), np.abs(coeffs))
    return num / den if den else num


def polish(coeffs, z: complex, steps: int = 3) -> complex:
    """A few Newton steps; keeps the input if Newton does not improve the residual."""
    c = np.asarray(coeffs, dtype=complex)
    dc = P.polyder(c)
    best, best_res = z, backward_residual(c, z)
    for _ in range(steps):
        d = P.polyval(z, dc)
        if d == 0:
            break
        z = z - P.polyval(z, c) / d
        res = backward_residual(c, z)
        if res < best_res:
            best, best_res = z, res
    return best


def certified_roots(coeffs, tol: float = RESIDUAL_TOL) -> np.ndarray:
    """All roots of ``sum_k coeffs[k] z^k``, each certified to backward residual <= tol."""
    c = trim(coeffs)
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        raise RootFindingError("the zero polynomial has no isolated roots")
    zeros = np.zeros(nz[0], complex)
    c = c[nz[0]:]
    if len(c) < 2:
        return zeros
    z = np.array([polish(c, zi) for zi in np.roots(c[::-1])], dtype=complex)
    res = np.array([backward_residual(c, zi) for zi in z])
    if np.any(res > tol):
        raise RootFindingError(f"root residual {res.max():.3g} above {tol:g}")
    return np.concatenate([zeros, z])
