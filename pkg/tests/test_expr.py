"""expr-core: basis closure, canonical form, commutators, adjoint, truncation."""
from fractions import Fraction

import numpy as np
import pytest
from conftest import commuting_point, exprs
from hypothesis import given, settings
from hypothesis import strategies as st

from fwt import basis as B
from fwt import builders as bl
from fwt import goldens as gd
from fwt.errors import SeriesNotRequested
from fwt.expr import (I, adjoint, anticommutator, canonicalize, commutator, func_of_even, is_even, one,
                      scalar, substitute_consts, truncate, zero)
from fwt.numkit import realize
from fwt.policy import TruncationPolicy, policy_scope


# ---------------------------------------------------------------- matrix basis

def test_basis_closure_all_64x64_pairs():
    mats = [B.matrix(i) for i in range(B.N_BASIS)]
    for i in range(B.N_BASIS):
        for j in range(B.N_BASIS):
            k, ph = B.multiply(i, j)
            assert np.allclose(mats[i] @ mats[j], (1j ** ph) * mats[k], atol=0)


def test_beta_parity_of_every_basis_element():
    beta = B.matrix(B.beta()[0])
    for i in range(B.N_BASIS):
        M = B.matrix(i)
        if B.is_even(i):
            assert np.allclose(beta @ M, M @ beta)
        else:
            assert np.allclose(beta @ M, -M @ beta)


def test_named_matrices_follow_dirac_table():
    beta = B.matrix(B.beta()[0])
    assert np.allclose(beta, np.diag([1, 1, 1, 1, -1, -1, -1, -1]))
    for k in (1, 2, 3):
        a = B.matrix(B.alpha(k)[0])
        S = B.matrix(B.Sigma(k)[0])
        idx, ph = B.gamma(k)
        g = (1j ** ph) * B.matrix(idx)
        assert np.allclose(g, beta @ a)                       # gamma = beta alpha
        assert np.allclose(B.matrix(B.Pi(k)[0]), beta @ S)    # Pi = beta Sigma
        assert np.allclose(a @ a, np.eye(8))


# ---------------------------------------------------------------- canonicalize

def test_alpha_p_beta_anticommute():
    ap = bl.dot(bl.alpha(), bl.pivec())
    assert (ap * bl.beta() + bl.beta() * ap).is_zero()


def test_pi_commutator_gives_magnetic_field():
    p = bl.pivec()
    assert p[0] * p[1] - p[1] * p[0] == I * bl.e() * bl.Bfield()[2]
    assert commutator(p[2], p[0]) == I * bl.e() * bl.Bfield()[1]


def test_pi_jet_rewrite_rule():
    assert commutator(bl.pivec()[0], bl.Phi()) == -I * bl.deriv(bl.Phi(), 1)


def test_beta_commutes_with_sigma():
    assert commutator(bl.beta(), bl.Sigma()[2]).is_zero()


def test_case_b_is_exact():
    from fwt.numkit import exact_case_hamiltonian
    from fwt.transform import check_exactness, split_even_odd
    s = split_even_odd(exact_case_hamiltonian("b"))
    assert commutator(s.even, s.odd).is_zero()  # Eq. (14); [beta m, O] = 2 m beta O never vanishes
    assert check_exactness(s, True)


@settings(max_examples=1000)
@given(exprs())
def test_canonicalize_idempotent(x):
    c = canonicalize(x)
    assert canonicalize(c) == c
    assert c == x


@given(exprs(), exprs())
def test_addition_commutative_and_cancels(a, b):
    assert a + b == b + a
    assert (a - a).is_zero()


@given(exprs(2, 2), exprs(2, 2), exprs(2, 2))
def test_multiplication_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(exprs(2, 2), exprs(2, 2), exprs(2, 2))
def test_commutator_bilinear(a, b, c):
    k = scalar(Fraction(3, 2))
    assert commutator(a + c, b) == commutator(a, b) + commutator(c, b)
    assert commutator(k * a, b) == k * commutator(a, b)
    assert anticommutator(a, b + c) == anticommutator(a, b) + anticommutator(a, c)


@given(exprs(2, 2), exprs(2, 2))
def test_commutator_antisymmetric_anticommutator_relation(a, b):
    assert commutator(a, b) == -commutator(b, a)
    assert anticommutator(a, b) == commutator(a, b) + scalar(2) * b * a


@given(exprs(2, 2), exprs(2, 2), exprs(2, 2))
def test_jacobi_identity(a, b, c):
    j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert j.is_zero()


@given(exprs())
def test_adjoint_involution(x):
    assert adjoint(adjoint(x)) == x


@given(exprs(2, 2), exprs(2, 2))
def test_adjoint_reverses_products(a, b):
    assert adjoint(a * b) == adjoint(b) * adjoint(a)


def test_adjoint_examples():
    ap = bl.dot(bl.alpha(), bl.pivec())
    assert adjoint(ap) == ap
    bap = bl.beta() * ap
    assert adjoint(bap) == -bap
    ige = I * bl.mu1() * bl.dot(bl.gamma(), bl.Efield())
    assert adjoint(ige) == ige


@settings(max_examples=1000)
@given(exprs(), st.integers(0, 2 ** 32 - 1))
def test_adjoint_matches_conjugate_transpose(x, seed):
    at = commuting_point(np.random.default_rng(seed))
    A = realize(x, at).matrix
    assert np.allclose(realize(adjoint(x), at).matrix, A.conj().T, atol=1e-12)


@given(exprs(), st.integers(0, 2 ** 32 - 1))
def test_parity_soundness(x, seed):
    at = commuting_point(np.random.default_rng(seed))
    beta = B.matrix(B.beta()[0])
    from fwt.transform import _parity_split
    ev, od = _parity_split(x)
    assert ev + od == x
    E, O = realize(ev, at).matrix, realize(od, at).matrix
    assert np.allclose(beta @ E, E @ beta, atol=1e-12)
    assert np.allclose(beta @ O, -O @ beta, atol=1e-12)
    assert is_even(ev)


@given(exprs(2, 2), exprs(2, 2), st.integers(0, 2 ** 32 - 1))
def test_homomorphism_at_commuting_points(a, b, seed):
    at = commuting_point(np.random.default_rng(seed))
    lhs = realize(a * b, at).matrix
    rhs = realize(a, at).matrix @ realize(b, at).matrix
    assert np.allclose(lhs, rhs, atol=1e-12)


# ---------------------------------------------------------------- truncation

@given(exprs(), st.integers(0, 2), st.integers(0, 2), st.integers(0, 1))
def test_truncate_idempotent_and_monotone(x, f, d, w):
    pol = TruncationPolicy(f, d, w)
    t = truncate(x, pol)
    assert truncate(t, pol) == t
    for k, v in t.items():           # kept terms are unchanged
        assert x.terms[k] == v


def test_truncate_weak_degree_drops_G_squared():
    pol = TruncationPolicy(max_weak_degree=1)
    core = gd.eq23_core()
    t = truncate(core, pol)
    assert any(k[1][3] == 2 for k in core.terms)
    assert not any(k[1][3] >= 2 for k in t.terms)


def test_truncate_free_particle_unchanged():
    H = bl.free_dirac()
    for pol in (TruncationPolicy(0, 0, 0), TruncationPolicy(inv_mass_order=0), TruncationPolicy(1, 1, 1)):
        assert truncate(substitute_consts(H, e=0), pol) == substitute_consts(H, e=0)


def test_truncate_second_derivatives():
    x = bl.deriv(bl.deriv(bl.Phi(), 1), 2) + bl.deriv(bl.Phi(), 1)
    assert truncate(x, TruncationPolicy(max_deriv_order=1)) == bl.deriv(bl.Phi(), 1)


def test_zero_consts_policy():
    p = bl.pivec()
    with policy_scope(TruncationPolicy().with_zero("e")):
        assert commutator(p[0], p[1]).is_zero()


def test_function_commutator_needs_policy():
    F = func_of_even(bl.dot(bl.pivec(), bl.pivec()) + bl.m() * bl.m(), "1/x")
    with pytest.raises(SeriesNotRequested):
        commutator(F, bl.Phi())


def test_scalar_coefficients_lowest_terms():
    x = scalar(Fraction(6, 4))
    (v,) = x.terms.values()
    assert v == Fraction(3, 2) and v.denominator > 0
    assert (x - x).terms == {}
    assert zero().is_zero() and not one().is_zero()
