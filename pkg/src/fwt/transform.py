"""Even/odd splitting, exact FW transformation, the two-stage relativistic method and
the classic nonrelativistic iteration.

Conventions: ``Dt`` is the atom ``i d/dt``.  With ``X = (eps+m) g``, ``Y = beta O g`` and
``g = (2 eps (eps+m))**-1/2`` the unitary of Eq. (18) is ``U = X + Y``, ``U^dag = X - Y``
and ``X^2 - Y^2 = 1``.  Hence

    E' = E - 1/2 [X, [X, Z]] + 1/2 [Y, [Y, Z]],   O' = Y Z X - X Z Y,   Z = E - Dt

(the paper's Eq. (29) prints 1/4; 1/2 is what ``ABA = 1/2({A^2,B} - [A,[A,B]])``
gives and what Eq. (39) uses).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from . import basis as B
from .commutators import power_series
from .errors import NonHermitianInput, NoConvergence, NotExact, SeriesDivergence, SeriesNotRequested
from .expr import (BA, CO, FU, JE, MAX_SERIES, NT, PI, I, OperatorExpr, adjoint, anticommutator,
                   commutator, dt_op, func_of_even, grade, is_function_free, mat, multiply, one,
                   scalar, truncate, zero)
from .policy import TruncationPolicy, current, policy_scope

_BETA = B.beta()[0]
_MASS_KEY = (0, (1, 0, 0, 0, 0, 0, 0, 0), _BETA, (), (), 0, None)


def beta() -> OperatorExpr:
    return mat(B.beta())


# ---------------------------------------------------------------- splitting

@dataclass(frozen=True)
class HamSplit:
    """``H = mass + even + odd`` with ``mass = beta m`` (Eq. 3)."""

    mass: OperatorExpr
    even: OperatorExpr
    odd: OperatorExpr

    def total(self) -> OperatorExpr:
        return self.mass + self.even + self.odd


def _parity_split(H: OperatorExpr):
    ev = H.filter(lambda k: B.is_even(k[BA]))
    od = H.filter(lambda k: not B.is_even(k[BA]))
    return ev, od


def split_even_odd(H: OperatorExpr, check_hermitian: bool = True) -> HamSplit:
    if check_hermitian and is_function_free(H) and adjoint(H, TruncationPolicy()) != H:
        raise NonHermitianInput("Hamiltonian is not Hermitian")
    mass = H.filter(lambda k: k == _MASS_KEY)
    ev, od = _parity_split(H - mass)
    return HamSplit(mass, ev, od)


def check_exactness(s: HamSplit, stationary: bool = True) -> bool:
    """Eq. (14): sufficient condition ``[E, O] = 0`` for stationary fields."""
    if not stationary:
        return False
    return commutator(s.even, s.odd, TruncationPolicy()).is_zero()


def is_stationary(H: OperatorExpr) -> bool:
    """True when no time-derivative jet appears (the fields may still be declared
    nonstationary by the caller)."""
    return not any(j[5] for k in H.terms for j in k[JE])


# ---------------------------------------------------------------- exact transformation

def epsilon_core(s: HamSplit, policy: Optional[TruncationPolicy] = None) -> OperatorExpr:
    """``m^2 + O^2`` (truncated by the policy, if any)."""
    pol = policy if policy is not None else current()
    core = scalar(1, m=2) + multiply(s.odd, s.odd, TruncationPolicy())
    return truncate(core, pol)


def epsilon(s: HamSplit, policy: Optional[TruncationPolicy] = None) -> OperatorExpr:
    """``eps = sqrt(m^2 + O^2)`` (Eq. 16), kept as an opaque function of the even core."""
    return func_of_even(epsilon_core(s, policy), "x")


def _xy(s: HamSplit, policy):
    core = epsilon_core(s, policy)
    X = func_of_even(core, "x + m", 1)
    g = func_of_even(core, "1", 1)
    Y = multiply(multiply(beta(), s.odd, policy), g, policy)
    return X, Y


def build_exact_unitary(s: HamSplit, policy: Optional[TruncationPolicy] = None) -> OperatorExpr:
    """``U = (eps + m + beta O) / sqrt(2 eps (eps + m))`` (Eq. 18)."""
    if s.odd.is_zero():
        return one()
    X, Y = _xy(s, policy if policy is not None else current())
    return X + Y


def exact_fw(s: HamSplit, stationary: bool = True, override: bool = False,
             policy: Optional[TruncationPolicy] = None) -> OperatorExpr:
    """``H' = beta eps + E`` (Eq. 17).  Only the policy's ``zero_consts`` apply to ``eps``."""
    if not override and not check_exactness(s, stationary):
        raise NotExact("[E, O] != 0 or fields nonstationary; pass override=True to force")
    if s.odd.is_zero():
        return s.mass + s.even
    pol = policy if policy is not None else current()
    base = TruncationPolicy(zero_consts=pol.zero_consts) if pol is not None else TruncationPolicy()
    return multiply(beta(), epsilon(s, base)) + s.even


# ---------------------------------------------------------------- report

@dataclass
class StageRecord:
    name: str
    unitary: str
    hamiltonian: OperatorExpr
    residual_odd: OperatorExpr

    def residual_grade(self):
        if self.residual_odd.is_zero():
            return None
        g = [grade(k) for k in self.residual_odd.terms]
        return {"min_field_degree": min(x[0] for x in g), "min_deriv_order": min(x[1] for x in g),
                "max_inv_mass": max(-x[3] for x in g), "terms": len(g)}


@dataclass
class TransformReport:
    stages: list = field(default_factory=list)
    exact: bool = False
    policy: Optional[TruncationPolicy] = None
    iterations: int = 0
    seconds: float = 0.0

    def to_dict(self) -> dict:
        from .dsl import print_expr
        pol = self.policy
        return {
            "exact": self.exact,
            "policy": None if pol is None else {
                "max_field_degree": pol.max_field_degree, "max_deriv_order": pol.max_deriv_order,
                "max_weak_degree": pol.max_weak_degree, "inv_mass_order": pol.inv_mass_order},
            "stage_count": len(self.stages),
            "iterations": self.iterations,
            "seconds": round(self.seconds, 3),
            "stages": [{"name": st.name, "unitary": st.unitary, "terms": len(st.hamiltonian),
                        "residual_odd_terms": len(st.residual_odd),
                        "residual_grade": st.residual_grade()} for st in self.stages],
            "hamiltonian": print_expr(self.stages[-1].hamiltonian) if self.stages else "0",
        }


# ---------------------------------------------------------------- helpers

def _nonrel(pol) -> bool:
    return pol is not None and pol.inv_mass_order is not None


def _bch(S: OperatorExpr, Hm: OperatorExpr, pol) -> OperatorExpr:
    """``exp(iS) Hm exp(-iS) = Hm + i[S,Hm] + i^2/2! [S,[S,Hm]] + ...``"""
    out = Hm
    term = Hm
    for k in range(1, MAX_SERIES + 1):
        term = multiply(I, commutator(S, term, pol), pol) * Fraction(1, k)
        if term.is_zero():
            return out
        out = out + term
    raise SeriesDivergence("BCH series did not terminate under the policy")


def _raise_pol(pol):
    """S multiplies ``beta m`` / ``beta eps`` (weight -1) once; keep one more 1/m order."""
    return pol.bump(inv_mass=1) if _nonrel(pol) else pol


# ---------------------------------------------------------------- stage 1

def stage1_transform(s: HamSplit, policy: Optional[TruncationPolicy] = None, stationary: bool = False):
    """Transformation with the operator of Eq. (18): returns ``(eps, E', O')``.

    Relativistic policies keep ``eps`` opaque; a nonrelativistic policy
    (``inv_mass_order``) expands ``X``, ``Y`` and ``eps`` in powers of ``O^2/m^2``,
    in which case ``eps`` is returned as that series.  ``stationary=True`` asserts
    static fields: ``Z = E`` and time-derivative jets are dropped.
    """
    pol = policy if policy is not None else current()
    if pol is None or not pol.bounded:
        if check_exactness(s, True) and s.odd.is_zero():
            return zero() if s.mass.is_zero() else scalar(1, m=1), s.even, zero()
        raise SeriesNotRequested("not exactly transformable; the series needs a bounded truncation policy")
    if s.odd.is_zero():
        eps = scalar(1, m=1)
        return eps, truncate(s.even, pol), zero()
    X, Y, eps, Z = stage1_operators(s, pol, stationary)
    XX, YY = stage1_double_commutators(s, pol, stationary)
    even = s.even - XX + YY
    odd = multiply(multiply(Y, Z, pol), X, pol) - multiply(multiply(X, Z, pol), Y, pol)
    even, odd = truncate(even, pol), truncate(odd, pol)
    if stationary:
        even, odd = _static(even), _static(odd)
    return eps, even, odd


def _static(x: OperatorExpr) -> OperatorExpr:
    from .expr import drop_jets
    return drop_jets(x, lambda j: j[5] > 0)


def stage1_operators(s: HamSplit, policy: TruncationPolicy, stationary: bool = False):
    """``(X, Y, eps, Z)`` of Eqs. (28)-(29): ``U = X + Y``, ``Z = E - i d/dt``.

    Under a nonrelativistic policy ``X``, ``Y`` and ``eps`` are series in ``O^2/m^2``."""
    pol = policy
    Z = s.even if stationary else s.even - dt_op()
    if _nonrel(pol):
        u = multiply(s.odd, s.odd, pol.bump(inv_mass=2))
        X = power_series("x + m", 1, u, pol)
        Yc = power_series("1", 1, u, pol)
        Y = multiply(multiply(beta(), s.odd, pol), Yc, pol)
        eps = power_series("x", 0, u, pol)
    else:
        X, Y = _xy(s, pol)
        eps = epsilon(s, pol)
    return X, Y, eps, Z


def stage1_double_commutators(s: HamSplit, policy: TruncationPolicy, stationary: bool = False):
    """The two terms of Eq. (29): ``(1/2)[X,[X,Z]]`` and ``(1/2)[Y,[Y,Z]]`` (D1)."""
    pol = policy
    X, Y, _, Z = stage1_operators(s, pol, stationary)
    half = Fraction(1, 2)
    XX = commutator(X, commutator(X, Z, pol), pol) * half
    YY = commutator(Y, commutator(Y, Z, pol), pol) * half
    return truncate(XX, pol), truncate(YY, pol)


# ---------------------------------------------------------------- stage 2

def _inverse_eps(eps: OperatorExpr, pol) -> OperatorExpr:
    """``1/eps`` for an opaque ``eps`` (function term) or a 1/m series."""
    fterms = [k for k in eps.terms if k[FU] is not None]
    if fterms:
        (k,) = fterms
        from .expr import core_expr
        return func_of_even(core_expr(k[FU][0]), "1/x")
    # eps = m + w with w = O(1/m):  1/eps = 1/m - w/m^2 + w^2/m^3 - ...
    w = eps - scalar(1, m=1)
    out = scalar(1, m=-1)
    term = scalar(1, m=-1)
    for _ in range(MAX_SERIES):
        term = multiply(multiply(term, w, pol), scalar(-1, m=-1), pol)
        if term.is_zero():
            return out
        out = out + term
    raise SeriesDivergence("1/eps series did not terminate")


def stage2_transform(eps: OperatorExpr, even: OperatorExpr, odd: OperatorExpr,
                     policy: Optional[TruncationPolicy] = None, max_iters: int = MAX_SERIES):
    """Iterate ``S = -(i/4) beta {O, 1/eps}`` (Eq. 30) until no odd term survives the
    policy.  Returns ``(Hfw, report)``."""
    pol = policy if policy is not None else current()
    H = multiply(beta(), eps, pol) + even + odd
    report = TransformReport(policy=pol)
    if odd.is_zero():
        report.stages.append(StageRecord("stage2", "identity", H, zero()))
        return H, report
    spol = _raise_pol(pol)
    inv_eps = _inverse_eps(eps, spol)
    for it in range(1, max_iters + 1):
        _, od = _parity_split(H)
        if od.is_zero():
            report.iterations = it - 1
            return H, report
        S = multiply(scalar(Fraction(-1, 4), 1), multiply(beta(), anticommutator(od, inv_eps, spol), spol), spol)
        Hm = H - dt_op()
        H = truncate(_bch(S, Hm, pol) + dt_op(), pol)
        _, od = _parity_split(H)
        report.stages.append(StageRecord(f"stage2[{it}]", "exp(iS), S = -(i/4) beta {O, 1/eps}", H, od))
    _, od = _parity_split(H)
    if not od.is_zero():
        raise NoConvergence(f"odd residue of {len(od)} terms after {max_iters} iterations")
    report.iterations = max_iters
    return H, report


# ---------------------------------------------------------------- classic FW

def nonrel_fw_step(s: HamSplit, policy: Optional[TruncationPolicy] = None):
    """One classic iteration (Eqs. 5-7) with ``S = -i beta O / 2m``."""
    pol = policy if policy is not None else current()
    if not _nonrel(pol):
        raise ValueError("nonrel_fw_step needs a policy with inv_mass_order")
    if s.odd.is_zero():
        return s, zero()
    spol = pol.bump(inv_mass=1)
    S = multiply(scalar(Fraction(-1, 2), 1, m=-1), multiply(beta(), s.odd, spol), spol)
    H = _bch(S, s.total() - dt_op(), pol) + dt_op()
    return split_even_odd(truncate(H, pol), check_hermitian=False), S


def classic_fw(H: OperatorExpr, policy: Optional[TruncationPolicy] = None, max_iters: int = MAX_SERIES):
    pol = policy if policy is not None else current()
    t0 = time.perf_counter()
    with policy_scope(pol):
        s = split_even_odd(H)
        report = TransformReport(policy=pol)
        for it in range(1, max_iters + 1):
            if s.odd.is_zero():
                break
            s, _ = nonrel_fw_step(s, pol)
            report.stages.append(StageRecord(f"fw[{it}]", "exp(iS), S = -i beta O / 2m", s.total(), s.odd))
            report.iterations = it
        if not s.odd.is_zero():
            raise NoConvergence("classic FW iteration left odd terms inside the policy")
    report.seconds = time.perf_counter() - t0
    return s.total(), report


# ---------------------------------------------------------------- pipeline

def two_stage(H: OperatorExpr, policy: Optional[TruncationPolicy] = None, stationary: Optional[bool] = None,
              max_iters: int = MAX_SERIES, drop_pz: bool = False):
    """Full transformation: exact closed form when Eq. (14) holds, otherwise stage 1
    (Eq. 18) followed by the stage-2 iteration (Eqs. 30-31)."""
    from .expr import drop_pi
    pol = policy if policy is not None else current()
    t0 = time.perf_counter()
    if drop_pz:
        H = drop_pi(H, 3)
    if stationary is None:
        stationary = is_stationary(H)
    with policy_scope(pol):
        s = split_even_odd(H)
        if not _nonrel(pol) and check_exactness(s, stationary):
            Hfw = exact_fw(s, stationary)
            if pol is not None and pol.bounded:
                Hfw = truncate(Hfw, pol)
            rep = TransformReport(policy=pol, exact=True)
            rep.stages.append(StageRecord("exact", "U of Eq. (18)", Hfw, zero()))
            rep.seconds = time.perf_counter() - t0
            return Hfw, rep
        eps, ev, od = stage1_transform(s, pol)
        rep1 = StageRecord("stage1", "U of Eq. (18)", multiply(beta(), eps, pol) + ev + od, od)
        Hfw, rep = stage2_transform(eps, ev, od, pol, max_iters)
        rep.stages.insert(0, rep1)
    rep.seconds = time.perf_counter() - t0
    return Hfw, rep
