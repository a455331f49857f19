"""dsl: grammar coverage, errors, printing, round trips."""
from fractions import Fraction
from pathlib import Path

import pytest
from conftest import exprs
from hypothesis import given, settings

from fwt import builders as bl
from fwt import goldens as gd
from fwt.dsl import latex_document, parse_expr, parse_hamiltonian, parse_source, print_expr
from fwt.errors import ParseError, UnknownSymbol
from fwt.expr import I, scalar, truncate, zero
from fwt.policy import TruncationPolicy, policy_scope
from fwt.transform import split_even_odd

GOLDEN = Path(__file__).resolve().parents[1] / "src" / "fwt" / "data" / "eq40.txt"


def test_free_dirac_source():
    assert parse_hamiltonian("beta*m + alpha.pi") == bl.free_dirac()


def test_dirac_pauli_source():
    H = parse_hamiltonian("beta*m + alpha.pi + e*Phi + mu1*(-Pi.B + i*gamma.E)")
    assert H == bl.dirac_pauli(True)


def test_electroweak_source():
    src = ("beta*m + alpha.pi + e*Phi + mu1*(-Pi.B + i*gamma.E)"
           " - G/sqrt(2)*(C1*gamma5*n + C2*alpha.sigmam*n)")
    assert parse_hamiltonian(src) == bl.electroweak()


def test_mass_only_split():
    s = split_even_odd(parse_hamiltonian("beta*m"))
    assert s.even.is_zero() and s.odd.is_zero() and s.mass == bl.beta() * bl.m()


@pytest.mark.parametrize("text, expected", [
    ("2 + 3*4", scalar(14)),
    ("(1 - 2)/4", scalar(Fraction(-1, 4))),
    ("-beta", -bl.beta()),
    ("+beta", bl.beta()),
    ("pi_1^2", bl.pivec()[0] * bl.pivec()[0]),
    ("p_1", bl.pivec()[0]),
    ("m^-2*m^3", bl.m()),
    ("comm(pi_1, pi_2)", I * bl.e() * bl.Bfield()[2]),
    ("acomm(beta, beta)", scalar(2)),
    ("cross(pi, E).Sigma", bl.dot(bl.cross(bl.pivec(), bl.Efield()), bl.Sigma())),
    ("div(E)", bl.div(bl.Efield())),
    ("curl(B).Sigma", bl.dot(bl.curl(bl.Bfield()), bl.Sigma())),
    ("grad(Phi).alpha", bl.dot(bl.grad(bl.Phi()), bl.alpha())),
    ("d1(d2(Phi))", bl.deriv(bl.deriv(bl.Phi(), 2), 1)),
    ("ddt(E_1)", bl.ddt(bl.Efield()[0])),
    ("inv(m)*m", scalar(1)),
    ("sqrt(4)", scalar(2)),
    ("gamma5*gamma5", scalar(1)),
    ("1.5", scalar(Fraction(3, 2))),
])
def test_grammar_productions(text, expected):
    assert parse_expr(text) == expected


def test_epsilon_atoms():
    x = parse_expr("eps")
    assert len(x) == 1 and next(iter(x.terms))[-1] is not None
    assert print_expr(parse_expr("epsP")) == "sqrt(m^2 + pi_1^2 + pi_2^2 + pi_3^2)"


def test_vector_result_rejected_unless_allowed():
    with pytest.raises(ParseError):
        parse_expr("pi")
    v = parse_expr("pi", allow_vector=True)
    assert v == bl.pivec()


@pytest.mark.parametrize("text, line, col", [
    ("beta*m +", 1, 9),
    ("beta*(m", 1, 8),
    ("beta ** m", 1, 7),
    ("\n\n  alpha.pi)", 3, 11),
    ("comm(beta)", 1, 10),
    ("sqrt(m, m)", 1, 7),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as ei:
        parse_expr(text)
    assert (ei.value.line, ei.value.col) == (line, col)
    assert ei.value.expected


@pytest.mark.parametrize("text", ["foo", "A_1", "alpha_4", "sqrt(alpha_1)", "frob(m)"])
def test_unknown_symbols(text):
    with pytest.raises(ParseError):
        parse_expr(text)


def test_unknown_identifier_is_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        parse_expr("beta*xyz")


def test_source_sections():
    src = """# a comment
[constants]
mu1 = 1/3
[options]
weak = false
stationary = true
[hamiltonian]
beta*m + alpha.pi + mu1*i*gamma.E + G*gamma5*n + e*ddt(Phi)
"""
    hs = parse_source(src)
    assert hs.constants == {"mu1": Fraction(1, 3)} and hs.options == {"weak": False, "stationary": True}
    H = parse_hamiltonian(hs)
    assert H == bl.free_dirac() + scalar(Fraction(1, 3)) * I * bl.dot(bl.gamma(), bl.Efield())


def test_source_errors_report_lines():
    with pytest.raises(UnknownSymbol) as ei:
        parse_source("[constants]\nq = 1\n[hamiltonian]\nbeta\n")
    assert ei.value.line == 2
    with pytest.raises(ParseError) as ei:
        parse_hamiltonian("[options]\nweak = false\n[hamiltonian]\nbeta +\n")
    assert ei.value.line == 5 or ei.value.line == 4
    with pytest.raises(ParseError):
        parse_source("[options]\nweak = maybe\n[hamiltonian]\nbeta\n")
    with pytest.raises(ParseError):
        parse_source("[constants]\nm = 1\n")


def test_print_empty_is_zero():
    assert print_expr(zero()) == "0"
    assert parse_expr("0") == zero()


def test_print_free_fw_has_radical():
    from fwt.transform import two_stage
    H, _ = two_stage(bl.free_dirac(), TruncationPolicy().with_zero("e"))
    assert print_expr(H) == "beta*sqrt(m^2 + pi_1^2 + pi_2^2 + pi_3^2)"
    assert "\\sqrt{" in print_expr(H, "latex")


def test_latex_labels():
    tex = print_expr(parse_expr("mu1*Pi.B + beta/(2*m)"), "latex")
    assert "H_{1}" in tex and "\\mu'" in tex and "\\frac" in tex and "\\beta" in tex
    doc = latex_document(parse_expr("beta*m"))
    assert doc.startswith("\\documentclass") and doc.rstrip().endswith("\\end{document}")


def test_eq40_golden_byte_for_byte():
    pol = TruncationPolicy(inv_mass_order=3)
    with policy_scope(pol):
        x = truncate(gd.eq40(), pol)
    assert print_expr(x) + "\n" == GOLDEN.read_text(encoding="utf-8")


@settings(max_examples=300)
@given(exprs())
def test_parse_print_round_trip(x):
    assert parse_expr(print_expr(x)) == x


@pytest.mark.parametrize("name", ["eq33", "eq39", "eps_weak_field", "W", "j_term"])
def test_round_trip_goldens(name):
    pol = TruncationPolicy(max_field_degree=1, max_deriv_order=1, max_weak_degree=1)
    with policy_scope(pol):
        x = getattr(gd, name)()
        assert parse_expr(print_expr(x)) == x


def test_printer_deterministic():
    x = bl.electroweak()
    assert print_expr(x) == print_expr(parse_expr(print_expr(x)))
