"""Commutators with inverses and square roots of operators, and expansions of
functions of even operators (weak-field and inverse-mass series)."""
from __future__ import annotations

import math
from dataclasses import replace
from fractions import Fraction
from typing import Optional

import sympy as sp

from .errors import NotInvertible, SeriesDivergence
from .expr import (CO, FU, JE, M, MAX_SERIES, MS, NO_CONSTS, X, OperatorExpr, _attach, _fderiv,
                   _fscale, _m_monomial, anticommutator, commutator, core_expr, func_of_even, grade,
                   is_function_free, multiply, register_core, scalar, truncate, zero)
from .policy import TruncationPolicy, current


def _single_function(A: OperatorExpr):
    if len(A) != 1:
        return None
    (k, v), = A.items()
    if k[FU] is None or k[JE] or k[2] != 0 or k[4] or k[5] or k[0]:
        return None
    return k, v


def inverse(A: OperatorExpr) -> OperatorExpr:
    """Inverse of a scalar or of a single function of an even operator."""
    sf = _single_function(A)
    if sf is None:
        if len(A) == 1:
            (k, v), = A.items()
            if k[FU] is None and not k[JE] and k[2] == 0 and not k[4] and not k[5] and not k[0]:
                return OperatorExpr({(0, tuple(-c if i != 7 else c for i, c in enumerate(k[CO])), 0, (), (), 0,
                                      None): 1 / v}) * _s2_inverse(k[CO][7])
        raise NotInvertible("operator is not a function of an even operator")
    k, v = sf
    cid, R, h = k[FU]
    if R == 0:
        raise NotInvertible("zero function")
    Rinv = 1 / R
    if h:
        Rinv = Rinv * 2 * X * (X + MS)
    # g**-1 = (2x(x+m))**(1/2) = 2x(x+m) * g
    return func_of_even(core_expr(cid), Rinv / sp.Rational(v.numerator, v.denominator), h)


def _s2_inverse(k):
    return scalar(Fraction(1, 2), s2=1) if k else scalar(1)


def inv_commutator(A: OperatorExpr, B: OperatorExpr, policy=None) -> OperatorExpr:
    """``[A^-1, B] = A^-1 [B, A] A^-1``."""
    Ai = inverse(A)
    return multiply(multiply(Ai, commutator(B, A, policy), policy), Ai, policy)


def sqrt_commutator(A: OperatorExpr, B: OperatorExpr, policy: Optional[TruncationPolicy] = None,
                    _depth: int = 0) -> OperatorExpr:
    """``[A, B]`` for ``A`` a square root, by successive approximation of
    ``[A,B] = 1/4 {A^-1, [A^2, B]} - 1/4 [[A, [A, B]], A^-1]``.

    The nested commutators are evaluated by the same identity (and by
    ``[A^-1, D] = A^-1 [D, A] A^-1``) on operands of strictly higher grade.
    """
    pol = policy if policy is not None else current()
    B = truncate(B, pol)
    if B.is_zero():
        return zero()
    if _depth > MAX_SERIES:
        raise SeriesDivergence("successive approximation did not raise the grade")
    sf = _single_function(A)
    if sf is None or sf[0][FU][1] != X or sf[0][FU][2] or sf[1] != 1:
        raise ValueError("sqrt_commutator expects A = sqrt(core)")
    A2 = core_expr(sf[0][FU][0])
    Ai = inverse(A)
    lead = multiply(scalar(Fraction(1, 4)), anticommutator(Ai, commutator(A2, B, pol), pol), pol)
    if lead.is_zero():
        return zero()
    _check_raised(B, lead, pol)
    inner = sqrt_commutator(A, lead, pol, _depth + 1)  # [A, [A, B]] to the order needed
    # [inner', A^-1] = -[A^-1, inner'] = -A^-1 [inner', A] A^-1 = A^-1 [A, inner'] A^-1
    inner2 = sqrt_commutator(A, inner, pol, _depth + 1)
    corr_inner = multiply(multiply(Ai, inner2, pol), Ai, pol)
    # successive approximation: refine [A,B] until the correction vanishes under the policy
    full = lead - multiply(scalar(Fraction(1, 4)), corr_inner, pol)
    return truncate(full, pol)


def _check_raised(B, C, pol):
    if pol is None or not pol.bounded:
        return
    gb = min((grade(k)[0] + grade(k)[1]) for k, _ in B.items())
    gc = min((grade(k)[0] + grade(k)[1]) for k, _ in C.items())
    if gc <= gb:
        raise SeriesDivergence("commutator did not raise the grade")


# ---------------------------------------------------------------- expansions

def _split_function_terms(x: OperatorExpr):
    plain = {}
    funcs = []
    for k, v in x.items():
        if k[FU] is None:
            plain[k] = v
        else:
            funcs.append((k, v))
    return OperatorExpr(plain), funcs


def expand_weak_field(x: OperatorExpr, base_core: OperatorExpr, policy: Optional[TruncationPolicy] = None
                      ) -> OperatorExpr:
    """Re-express functions of a core ``A`` as functions of ``base_core`` with
    ``A = base_core + V``, to first order in ``V``:

        f(A0 + V) = f(A0) + sum_k ad_{A0}^k(V) f^(k+1)(A0) / (k+1)!
    """
    pol = policy if policy is not None else current()
    if pol is not None and pol.max_field_degree is not None and pol.max_field_degree > 1:
        raise ValueError("weak-field expansion is first order in the field part of the core")
    base_id = register_core(base_core)
    plain, funcs = _split_function_terms(x)
    out = plain
    for k, v in funcs:
        cid, R, h = k[FU]
        left = OperatorExpr({k[:FU] + (None,): v})
        f0 = (base_id, R, h)
        if cid == base_id:
            out = out + multiply(left, OperatorExpr._term((0, NO_CONSTS, 0, (), (), 0, f0)), pol)
            continue
        V = truncate(core_expr(cid) - base_core, pol)
        acc = OperatorExpr._term((0, NO_CONSTS, 0, (), (), 0, f0))
        cur = V
        Fd = _fderiv(f0)
        n = 0
        while not cur.is_zero():
            n += 1
            if n > MAX_SERIES:
                raise SeriesDivergence("weak-field expansion did not terminate")
            acc = acc + multiply(cur, OperatorExpr._term((0, NO_CONSTS, 0, (), (), 0,
                                                         _fscale(Fd, sp.Rational(1, math.factorial(n))))), pol)
            cur = truncate(commutator(base_core, cur, pol), pol)
            Fd = _fderiv(Fd)
        out = out + multiply(left, acc, pol)
    return out


def taylor_coefficients(R, half: int, n_terms: int):
    """Coefficients ``c_n`` (functions of m) of ``f(A) = sum c_n (A - m^2)^n``."""
    u = sp.Symbol("u", positive=True)
    f = R.subs(X, sp.sqrt(MS ** 2 + u))
    if half:
        f = f / sp.sqrt(2 * sp.sqrt(MS ** 2 + u) * (sp.sqrt(MS ** 2 + u) + MS))
    ser = sp.series(f, u, 0, n_terms).removeO()
    return [sp.simplify(ser.coeff(u, i)) for i in range(n_terms)]


def power_series(R, half: int, u: OperatorExpr, policy: TruncationPolicy) -> OperatorExpr:
    """``f(m^2 + u)`` as ``sum_n c_n m^k_n u^n`` for ``f = R(x) g**half``, truncated by the
    nonrelativistic policy.  ``u^n`` is kept only to the field degree its 1/m power allows."""
    K = policy.inv_mass_order
    if isinstance(R, str):
        R = sp.sympify(R, locals={"x": X, "m": MS})
    n_terms = K + 4
    acc = zero()
    upow = scalar(1)
    for n, c in enumerate(taylor_coefficients(R, half, n_terms)):
        mono = _m_monomial(sp.powsimp(sp.expand(c)))
        if mono is None:
            raise ValueError(f"non-homogeneous expansion coefficient {c}")
        q, mk = mono
        if K + mk < 0:
            break
        pol_n = replace(policy, inv_mass_order=K + mk)
        if n:
            upow = multiply(upow, u, pol_n)
        if q:
            acc = acc + multiply(scalar(q, m=mk), upow, policy)
    return acc


def expand_inverse_mass(x: OperatorExpr, policy: Optional[TruncationPolicy] = None) -> OperatorExpr:
    """Replace every function of a core ``A = m^2 + u`` by its Taylor series in ``u``."""
    pol = policy if policy is not None else current()
    if pol is None or pol.inv_mass_order is None:
        raise ValueError("inverse-mass expansion needs a policy with inv_mass_order")
    plain, funcs = _split_function_terms(x)
    out = plain
    for k, v in funcs:
        cid, R, h = k[FU]
        left = OperatorExpr({k[:FU] + (None,): v})
        u = core_expr(cid) - scalar(1, m=2)
        out = out + multiply(left, power_series(R, h, u, pol.bump(inv_mass=-_left_mexp(k))), pol)
    return truncate(out, pol)


def _left_mexp(k):
    return k[CO][M]


def expand_func_of_even(x: OperatorExpr, around: str, policy: Optional[TruncationPolicy] = None,
                        base_core: Optional[OperatorExpr] = None) -> OperatorExpr:
    """Expand functions of even operators in ``x``.

    ``around="weak-field"`` rewrites them as functions of ``base_core`` (default
    ``m^2 + pi^2``); ``around="inverse-mass"`` expands them in powers of ``1/m``.
    """
    if around == "weak-field":
        if base_core is None:
            from .builders import prime_core
            base_core = prime_core()
        return expand_weak_field(x, base_core, policy)
    if around == "inverse-mass":
        return expand_inverse_mass(x, policy)
    raise ValueError(f"unknown expansion {around!r}")
