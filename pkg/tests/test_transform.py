"""fw-transform: splitting, exactness, exact FW, two-stage and classic methods."""
import numpy as np
import pytest

from fwt import builders as bl
from fwt import goldens as gd
from fwt.dsl import parse_hamiltonian, print_expr
from fwt.errors import NonHermitianInput, NotExact, SeriesNotRequested
from fwt.expr import I, adjoint, is_even, one, substitute_consts, truncate
from fwt.numkit import PlaneWavePoint, exact_case_hamiltonian, realize, unitarity_residual, uniform_fields
from fwt.policy import TruncationPolicy, policy_scope
from fwt.transform import (beta, build_exact_unitary, check_exactness, classic_fw, exact_fw, is_stationary,
                           nonrel_fw_step, split_even_odd, stage1_double_commutators, stage1_transform,
                           stage2_transform, two_stage)

NONREL3 = TruncationPolicy(inv_mass_order=3)
FIRST = TruncationPolicy(max_field_degree=1, max_deriv_order=1, max_weak_degree=1)


# ---------------------------------------------------------------- splitting

def test_split_free():
    s = split_even_odd(bl.free_dirac())
    assert s.even.is_zero() and s.odd == bl.dot(bl.alpha(), bl.pivec()) and s.mass == bl.beta() * bl.m()


def test_split_electroweak_matches_eq22():
    H = bl.electroweak()
    s = split_even_odd(H)
    assert s.mass + s.even + s.odd == H
    assert is_even(s.even)
    b = beta()
    assert (b * s.even - s.even * b).is_zero()
    assert (b * s.odd + s.odd * b).is_zero()
    assert s.even == bl.e() * bl.Phi() - bl.mu1() * bl.dot(bl.Pi(), bl.Bfield())
    assert s.odd == (bl.dot(bl.alpha(), bl.pivec()) + I * bl.mu1() * bl.dot(bl.gamma(), bl.Efield())
                     + bl.pnc())


def test_split_even_only():
    s = split_even_odd(bl.beta() * bl.m() + bl.e() * bl.Phi())
    assert s.even == bl.e() * bl.Phi() and s.odd.is_zero()


def test_split_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        split_even_odd(I * bl.beta())


# ---------------------------------------------------------------- exactness

@pytest.mark.parametrize("case", ["free", "a", "b", "c"])
def test_exact_cases_detected(case):
    assert check_exactness(split_even_odd(exact_case_hamiltonian(case)), True)


def test_electric_potential_breaks_exactness():
    s = split_even_odd(parse_hamiltonian("beta*m + alpha.pi + e*Phi"))
    assert not check_exactness(s, True)
    with pytest.raises(NotExact):
        exact_fw(s)
    assert not exact_fw(s, override=True).is_zero()


def test_nonstationary_detection():
    assert not is_stationary(parse_hamiltonian("beta*m + alpha.pi + e*ddt(Phi)"))
    assert is_stationary(bl.free_dirac())
    assert not check_exactness(split_even_odd(bl.free_dirac()), stationary=False)


# ---------------------------------------------------------------- exact transformation

def test_unitary_identity_without_odd_part():
    assert build_exact_unitary(split_even_odd(bl.beta() * bl.m() + bl.e() * bl.Phi())) == one()


def test_unitary_at_plane_wave_point():
    s = split_even_odd(bl.free_dirac())
    U = build_exact_unitary(s)
    at = PlaneWavePoint((0.0, 0.0, 0.5), uniform_fields(), {"m": 1.0, "e": 0.0})
    assert unitarity_residual(realize(U, at)) < 1e-12


def test_unitary_rotation_angle():
    """tan(theta_1) = C / (eps + m) with C = |p| for the free particle."""
    s = split_even_odd(bl.free_dirac())
    U = realize(build_exact_unitary(s), PlaneWavePoint((0.3, 0.0, 0.4), uniform_fields(),
                                                       {"m": 1.0, "e": 0.0})).matrix
    # U = cos(theta) + beta (alpha.p/|p|) sin(theta)
    cos = U[0, 0].real
    sin = np.linalg.norm(U[:4, 4:], 2)
    eps = np.sqrt(1 + 0.25)
    assert np.isclose(sin / cos, 0.5 / (eps + 1), atol=1e-14)


def test_exact_fw_free_particle():
    H, rep = two_stage(bl.free_dirac(), TruncationPolicy().with_zero("e"))
    assert rep.exact
    assert print_expr(H) == "beta*sqrt(m^2 + pi_1^2 + pi_2^2 + pi_3^2)"


def test_exact_fw_magnetic_core():
    H = exact_fw(split_even_odd(bl.free_dirac()))
    assert print_expr(H) == "beta*sqrt(m^2 + pi_1^2 + pi_2^2 + pi_3^2 - e*Sigma_1*B_1 - e*Sigma_2*B_2 - e*Sigma_3*B_3)"


def test_exact_fw_case_d_core_is_eq23():
    s = split_even_odd(exact_case_hamiltonian("d"))
    H = exact_fw(s, override=True)
    (k,) = [k for k in H.terms if k[-1] is not None]
    from fwt.expr import core_expr
    core = core_expr(k[-1][0])
    expected = truncate(gd.eq23_core(), None)
    expected = substitute_consts(expected, C1=0, C2=0)
    from fwt.expr import drop_jets, drop_pi
    from fwt import jets as J
    expected = drop_pi(drop_jets(expected, lambda j: j[0] in (J.PHI, J.EFIELD)
                                 or (j[0] == J.BFIELD and j[1] != 3) or j[5] > 0), 3)  # static fields
    assert core == expected


# ---------------------------------------------------------------- stage 1 and 2

def test_stage1_requires_policy_for_inexact_input():
    s = split_even_odd(bl.dirac_pauli(False))
    with pytest.raises(SeriesNotRequested):
        stage1_transform(s, None)


def test_stage1_free_particle():
    pol = TruncationPolicy(2, 1, 1).with_zero("e")  # no fields
    with policy_scope(pol):
        eps, ev, od = stage1_transform(split_even_odd(bl.free_dirac()), pol)
    assert ev.is_zero() and od.is_zero()


def test_stage1_exact_case_has_no_odd_residue():
    H = exact_case_hamiltonian("b")
    with policy_scope(FIRST):
        _, _, od = stage1_transform(split_even_odd(H), FIRST, stationary=True)
    assert od.is_zero()


def test_stage1_eq39():
    with policy_scope(NONREL3):
        s = split_even_odd(bl.dirac_pauli(False))
        XX, YY = stage1_double_commutators(s, NONREL3)
        assert YY == truncate(gd.eq39(), NONREL3)
        assert XX.is_zero()


def test_stage2_without_odd_part():
    with policy_scope(FIRST):
        eps = bl.eps_prime()
        ev = bl.e() * bl.Phi()
        H, rep = stage2_transform(eps, ev, ev * 0, FIRST)
    assert H == beta() * eps + ev and rep.iterations == 0


def test_two_stage_eq40_and_report():
    H, rep = two_stage(bl.dirac_pauli(False), NONREL3)
    with policy_scope(NONREL3):
        assert H == truncate(gd.eq40(), NONREL3)
    d = rep.to_dict()
    assert d["exact"] is False and d["stage_count"] == len(rep.stages) >= 2
    assert rep.stages[-1].residual_odd.is_zero()
    assert is_even(H)
    with policy_scope(NONREL3):
        assert truncate(adjoint(H), NONREL3) == H  # Hermitian up to terms beyond the caps


def test_classic_method_agrees():
    Hc, rep = classic_fw(bl.dirac_pauli(False), NONREL3)
    H2, _ = two_stage(bl.dirac_pauli(False), NONREL3)
    assert Hc == H2 and rep.iterations >= 2


def test_nonrel_step_without_odd_part():
    s = split_even_odd(bl.beta() * bl.m() + bl.e() * bl.Phi())
    with policy_scope(NONREL3):
        s2, S = nonrel_fw_step(s, NONREL3)
    assert s2.total() == s.total() and S.is_zero()


def test_nonrel_step_raises_order():
    with policy_scope(NONREL3):
        s = split_even_odd(bl.dirac_pauli(False))
        s1, _ = nonrel_fw_step(s, NONREL3)
    from fwt.expr import grade
    worst_in = max(-grade(k)[3] + grade(k)[0] for k in s.odd.terms)
    worst_out = min(-grade(k)[3] + grade(k)[0] for k in s1.odd.terms)
    assert worst_out > 0 and worst_out >= worst_in


def test_order_contract_first_order_policy():
    """After stage 2 with caps (field<=1, deriv<=1) no odd term survives inside the caps."""
    H = parse_hamiltonian("beta*m + alpha.pi + e*Phi")
    Hfw, rep = two_stage(H, TruncationPolicy(1, 1, 0))
    assert is_even(Hfw)
    for st in rep.stages[1:]:
        g = st.residual_grade()
        if g is not None:
            assert g["min_field_degree"] >= 1
