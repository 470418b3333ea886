import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from cuspalg.jet import (
    Jet,
    TruncationError,
    compose,
    exp_jet,
    from_derivatives,
    mul,
    reciprocal,
    revert,
    sqrt_order2,
    to_derivatives,
)

from .conftest import random_disk


def J(*c, N=None):
    return Jet(c, N if N is not None else len(c) - 1)


def assert_jet(actual, expected, tol=1e-12):
    assert actual.truncation == expected.truncation
    np.testing.assert_allclose(actual.coeffs, expected.coeffs, atol=tol, rtol=0)


# -- mul ---------------------------------------------------------------------

def test_mul_difference_of_squares():
    assert_jet(mul(J(1, 1, N=4), J(1, -1, N=4)), J(1, 0, -1, N=4))


def test_mul_binomial():
    a = J(0, 0, 1, 1, N=6)
    assert_jet(mul(a, a), J(0, 0, 0, 0, 1, 2, 1))


def test_mul_truncation_annihilates():
    a = Jet.monomial(2, 3)
    assert_jet(mul(a, a), Jet.zero(3))


def test_mismatched_truncation_is_an_error():
    with pytest.raises(TruncationError):
        mul(Jet.z(3), Jet.z(4))
    with pytest.raises(TruncationError):
        Jet.z(3) + Jet.z(4)
    with pytest.raises(TruncationError):
        compose(Jet.z(3), Jet.z(4))


# -- compose -----------------------------------------------------------------

def test_compose_rotation():
    tau = np.exp(0.7j)
    assert_jet(compose(Jet.monomial(2, 5), Jet.monomial(1, 5, tau)), Jet.monomial(2, 5, tau**2))


def test_compose_identity(rng):
    f = Jet(random_disk(rng, 8))
    assert_jet(compose(f, Jet.z(7)), f)


def test_compose_against_polynomial_expansion():
    # z^2 + 3z^3 + 4z^4 + 3z^5 + z^6, from expanding (z+z^2)^2 + (z+z^2)^3
    out = compose(J(0, 0, 1, 1, N=6), J(0, 1, 1, N=6))
    assert_jet(out, J(0, 0, 1, 3, 4, 3, 1))


def test_compose_matches_numpy_polynomial(rng):
    N = 9
    g = random_disk(rng, N + 1)
    psi = random_disk(rng, N + 1)
    psi[0] = 0
    full = Polynomial(g)(Polynomial(psi)).coef[:N + 1]
    assert_jet(compose(Jet(g), Jet(psi)), Jet(full), tol=1e-12)


def test_compose_rejects_constant_term():
    with pytest.raises(ValueError):
        compose(Jet.z(3), J(0.5, 1, N=3))


# -- revert ------------------------------------------------------------------

def test_revert_identity():
    assert_jet(revert(Jet.z(6)), Jet.z(6))


def test_revert_rotation():
    tau = np.exp(1.1j)
    assert_jet(revert(Jet.monomial(1, 5, tau)), Jet.monomial(1, 5, 1 / tau))


def test_revert_catalan():
    g = revert(J(0, 1, 1, N=4))
    assert_jet(g, J(0, 1, -1, 2, -5))
    assert_jet(compose(J(0, 1, 1, N=4), g), Jet.z(4))


def test_revert_needs_univalent_germ():
    with pytest.raises(ValueError):
        revert(J(0, 0, 1, N=3))


# -- sqrt_order2 -------------------------------------------------------------

def test_sqrt_exact_square():
    assert_jet(sqrt_order2(Jet.monomial(2, 6)), Jet.z(6))


def test_sqrt_series():
    chi = sqrt_order2(J(0, 0, 1, 1, N=4))
    assert_jet(chi, J(0, 1, 1 / 2, -1 / 8, 1 / 16))
    assert_jet(mul(chi, chi), J(0, 0, 1, 1, N=4))


def test_sqrt_principal_branch():
    assert_jet(sqrt_order2(Jet.monomial(2, 4, 4.0)), Jet.monomial(1, 4, 2.0))
    chi = sqrt_order2(Jet.monomial(2, 4, -1.0))
    assert chi[1] == pytest.approx(1j)


@pytest.mark.parametrize("c", [(1, 0, 1), (0, 1, 1), (0, 0, 0, 1)])
def test_sqrt_precondition(c):
    with pytest.raises(ValueError):
        sqrt_order2(Jet(c, 5))


# -- exp_jet -----------------------------------------------------------------

def test_exp_zero():
    assert_jet(exp_jet(Jet.zero(5)), Jet.constant(1, 5))


def test_exp_series():
    assert_jet(exp_jet(Jet.z(4)), J(1, 1, 1 / 2, 1 / 6, 1 / 24))


def test_exp_scaled():
    assert_jet(exp_jet(J(0, 2, N=2)), J(1, 2, 2))


def test_derivative_conversion_roundtrip(rng):
    f = Jet(random_disk(rng, 7))
    assert_jet(from_derivatives(to_derivatives(f)), f)
    assert to_derivatives(J(0, 0, 1, N=2))[2] == 2


def test_reciprocal():
    assert_jet(reciprocal(J(1, -1, N=4)), J(1, 1, 1, 1, 1))
    with pytest.raises(ZeroDivisionError):
        reciprocal(Jet.z(3))


# -- properties --------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)
orders = st.integers(1, 15)


def _jets(seed, N, k, zero_constant=False):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(k):
        c = random_disk(rng, N + 1)
        if zero_constant:
            c[0] = 0
        out.append(Jet(c))
    return out


@settings(max_examples=60, deadline=None)
@given(seeds, orders)
def test_ring_axioms(seed, N):
    a, b, c = _jets(seed, N, 3)
    assert mul(a, b).allclose(mul(b, a), 1e-10)
    assert mul(mul(a, b), c).allclose(mul(a, mul(b, c)), 1e-10)


@settings(max_examples=60, deadline=None)
@given(seeds, orders)
def test_compose_associative(seed, N):
    f, = _jets(seed, N, 1)
    g, h = _jets(seed + 1, N, 2, zero_constant=True)
    assert compose(compose(f, g), h).allclose(compose(f, compose(g, h)), 1e-10)


@settings(max_examples=60, deadline=None)
@given(seeds, orders)
def test_revert_both_sides(seed, N):
    rng = np.random.default_rng(seed)
    c = random_disk(rng, N + 1)
    c[0] = 0
    c[1] = (0.1 + 0.9 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    f = Jet(c)
    g = revert(f)
    z = Jet.z(N)
    # reversion amplifies coefficients roughly like |f'(0)|^(-N); scale the check accordingly
    tol = 1e-10 * max(1.0, g.norm())
    assert compose(f, g).allclose(z, tol)
    assert compose(g, f).allclose(z, tol)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 15))
def test_sqrt_squares_back(seed, N):
    rng = np.random.default_rng(seed)
    c = random_disk(rng, N + 1)
    c[:2] = 0
    c[2] = 0.2 + rng.uniform()
    pi = Jet(c)
    chi = sqrt_order2(pi)
    assert mul(chi, chi).allclose(pi, 1e-10 * max(1.0, chi.norm() ** 2))


@settings(max_examples=60, deadline=None)
@given(seeds, orders)
def test_exp_homomorphism(seed, N):
    a, b = _jets(seed, N, 2)
    assert mul(exp_jet(a), exp_jet(b)).allclose(exp_jet(a + b), 1e-10 * exp_jet(a + b).norm())
