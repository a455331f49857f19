"""commutator-tools: Eqs. (24)-(25), successive approximation, expansions."""
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg as sla

from fwt import builders as bl
from fwt import goldens as gd
from fwt.commutators import (expand_func_of_even, inv_commutator, inverse, sqrt_commutator,
                             taylor_coefficients)
from fwt.errors import NotInvertible
from fwt.expr import I, X, anticommutator, commutator, func_of_even, multiply, scalar, truncate
from fwt.numkit import PlaneWavePoint, identity_24_deviation, identity_25_deviation, realize, uniform_fields
from fwt.policy import TruncationPolicy, policy_scope

FIRST = TruncationPolicy(max_field_degree=1, max_deriv_order=1, max_weak_degree=1)


def _free_core():
    p = bl.pivec()
    return bl.m() * bl.m() + bl.dot(p, p)


def test_inv_commutator_vanishes_for_commuting_operand():
    A = func_of_even(_free_core(), "x")
    with policy_scope(FIRST):
        assert inv_commutator(A, bl.beta() * bl.m()).is_zero()
        assert inv_commutator(A, bl.Sigma()[0]).is_zero()


def test_inv_commutator_identity_symbolic():
    """[A^-1, B] = A^-1 [B, A] A^-1 agrees with the direct commutator."""
    A = func_of_even(_free_core(), "x")
    with policy_scope(FIRST):
        direct = commutator(inverse(A), bl.Phi(), FIRST)
        assert inv_commutator(A, bl.Phi(), FIRST) == truncate(direct, FIRST)


def test_inverse_rejects_non_function():
    with pytest.raises(NotInvertible):
        inverse(bl.pivec()[0])


def test_sqrt_commutator_of_number_is_zero():
    A = func_of_even(_free_core(), "x")
    with policy_scope(FIRST):
        assert sqrt_commutator(A, scalar(3), FIRST).is_zero()


def test_sqrt_commutator_leading_order():
    """[sqrt(m^2+p^2), f] = 1/4 {(m^2+p^2)^(-1/2), [p^2, f]} to first order."""
    A = func_of_even(_free_core(), "x")
    pol = TruncationPolicy(max_field_degree=1, max_deriv_order=1)
    with policy_scope(pol):
        Ai = func_of_even(_free_core(), "1/x")
        lead = truncate(multiply(scalar(Fraction(1, 4)), anticommutator(Ai, commutator(_free_core(), bl.Phi()))),
                        pol)
        assert sqrt_commutator(A, bl.Phi(), pol) == lead
        assert commutator(A, bl.Phi(), pol) == lead


@pytest.mark.parametrize("fn, n", [(identity_24_deviation, 50), (identity_25_deviation, 50)])
def test_matrix_identities(fn, n):
    assert fn(n) < 1e-12


def test_square_root_consistency():
    """realize(sqrt(O^2)) is the principal square root of realize(O^2)."""
    p = bl.pivec()
    O = bl.dot(bl.alpha(), p) + I * bl.mu1() * bl.dot(bl.gamma(), bl.Efield())
    core = O * O
    rng = np.random.default_rng(5)
    for _ in range(10):
        at = PlaneWavePoint(tuple(rng.uniform(-1, 1, 3)), uniform_fields(E=tuple(rng.uniform(-1, 1, 3))),
                            {"m": 1.0, "e": 0.0, "mu1": float(rng.uniform(-1, 1))})
        S = realize(func_of_even(core, "x"), at).matrix
        ref = sla.sqrtm(realize(core, at).matrix)
        assert np.allclose(S, ref, atol=1e-10)
        assert np.all(np.linalg.eigvalsh((S + S.conj().T) / 2) > -1e-12)


def test_taylor_coefficients_of_sqrt():
    import sympy as sp
    c = taylor_coefficients(X, 0, 3)
    m = sp.Symbol("m", positive=True)
    assert [sp.simplify(a - b) for a, b in zip(c, [m, 1 / (2 * m), -1 / (8 * m ** 3)])] == [0, 0, 0]


def test_weak_field_expansion_without_fields():
    core = bl.prime_core()
    with policy_scope(FIRST):
        assert expand_func_of_even(func_of_even(core, "x"), "weak-field") == bl.eps_prime()


def test_weak_field_expansion_pre_eq33_display():
    from fwt.transform import epsilon_core, split_even_odd
    with policy_scope(FIRST):
        core = epsilon_core(split_even_odd(bl.electroweak()), FIRST)
        assert expand_func_of_even(func_of_even(core, "x"), "weak-field") == gd.eps_weak_field()


def test_inverse_mass_expansion_sec8_display():
    pol = TruncationPolicy(inv_mass_order=3)
    p = bl.pivec()
    core = bl.m() * bl.m() + bl.dot(p, p) - bl.e() * bl.dot(bl.Sigma(), bl.Bfield())
    with policy_scope(pol):
        got = expand_func_of_even(func_of_even(core, "x"), "inverse-mass")
        assert got == truncate(gd.eps_inverse_mass(), pol)


def test_unknown_expansion():
    with pytest.raises(ValueError):
        expand_func_of_even(scalar(1), "sideways")
