"""Semiclassical reduction (Sec. VII) and the classical equations (37)-(38).

Classical quantities are sympy symbols: ``pi1..pi3`` (kinetic momentum), ``xi1..xi3``
(average spin), ``xip1..xip3`` (matter spin), the constants, and one symbol per field
jet (named as the DSL prints it, e.g. ``d1(E_2)``).

The reduction takes the upper block (``beta -> 1``), replaces ``Sigma -> xi`` and
``sigma' -> xi'``, ``pi`` by its classical value, and functions of ``m^2 + pi^2`` by
their values at ``eps' = sqrt(m^2 + pi^2)``.  Commutators between coordinates and
momenta are neglected: for a Hermitian operator these enter the normal-ordered
symbol with an imaginary coefficient at first order, so the reduction keeps the
real part.
"""
from __future__ import annotations

from functools import lru_cache

import sympy as sp

from .. import basis as B
from .. import jets as J
from ..errors import OddTermPresent
from ..expr import BA, CO, CONSTS, FU, IM, JE, MS, NT, PI, X, core_expr, OperatorExpr

PI_S = sp.symbols("pi1 pi2 pi3", real=True)
XI_S = sp.symbols("xi1 xi2 xi3", real=True)
XIP_S = sp.symbols("xip1 xip2 xip3", real=True)
CONST_S = {n: sp.Symbol(n, positive=True) if n == "m" else sp.Symbol(n, real=True)
           for n in ("m", "e", "mu1", "G", "C1", "C2")}

_jet_syms: dict = {}
_sym_jets: dict = {}


def jet_symbol(jet) -> sp.Symbol:
    s = _jet_syms.get(jet)
    if s is None:
        s = sp.Symbol(J.name(jet), real=True)
        _jet_syms[jet] = s
        _sym_jets[s] = jet
    return s


def field_symbol(field: str, comp: int = 0, d=(0, 0, 0), dt: int = 0) -> sp.Expr:
    """Reduced classical jet (a linear combination of jet symbols)."""
    jet = J.make(J.FIELD_CODES[field], comp, d, dt)
    return sum((sp.Rational(c.numerator, c.denominator) * jet_symbol(j) for c, j in J.reduce(jet)), sp.Integer(0))


def cderiv(expr: sp.Expr, axis: int) -> sp.Expr:
    """Derivative of a classical expression acting on its field jets (axis 0 = time)."""
    out = sp.Integer(0)
    for s in expr.free_symbols:
        jet = _sym_jets.get(s)
        if jet is None:
            continue
        dj = sum((sp.Rational(c.numerator, c.denominator) * jet_symbol(j) for c, j in J.derivative(jet, axis)),
                 sp.Integer(0))
        out += sp.diff(expr, s) * dj
    return sp.expand(out)


def jet_order(s: sp.Symbol) -> int:
    jet = _sym_jets.get(s)
    return 0 if jet is None else J.order(jet)


def eps_prime_sym():
    m = CONST_S["m"]
    return sp.sqrt(m ** 2 + sum(p ** 2 for p in PI_S))


@lru_cache(maxsize=None)
def _core_x(cid: int):
    core = core_expr(cid)
    val = _symbol(core, real_only=True)
    return sp.sqrt(val)


def _basis_value(idx: int):
    a, b, c = B.decode(idx)
    if a in (1, 2):
        raise OddTermPresent("odd matrix in semiclassical reduction")
    v = sp.Integer(1)
    if b:
        v *= XI_S[b - 1]
    if c:
        v *= XIP_S[c - 1]
    return v


def _symbol(x: OperatorExpr, real_only: bool = True) -> sp.Expr:
    out = sp.Integer(0)
    for k, v in x.items():
        if k[IM] and real_only:
            continue
        if k[NT]:
            raise ValueError("time-derivative atom in a semiclassical expression")
        t = sp.Rational(v.numerator, v.denominator) * (sp.I if k[IM] else 1)
        for name, pw in zip(CONSTS, k[CO]):
            if not pw:
                continue
            if name == "pinum":
                t *= sp.pi ** pw
            elif name == "s2":
                t *= sp.sqrt(2) ** pw
            else:
                t *= CONST_S[name] ** pw
        t *= _basis_value(k[BA])
        for j in k[JE]:
            t *= jet_symbol(j)
        for p in k[PI]:
            t *= PI_S[p - 1]
        if k[FU] is not None:
            cid, R, h = k[FU]
            xv = _core_x(cid)
            f = R.subs({X: xv, MS: CONST_S["m"]})
            if h:
                f = f / sp.sqrt(2 * xv * (xv + CONST_S["m"]))
            t *= f
        out += t
    return out


def semiclassical_reduce(op):
    """Classical symbol of an even operator (or a tuple of them)."""
    if isinstance(op, tuple):
        return tuple(semiclassical_reduce(o) for o in op)
    return _symbol(op, real_only=True)


def simplify_equal(a: sp.Expr, b: sp.Expr) -> bool:
    """Exact comparison of two classical expressions."""
    eps = sp.Symbol("epsP", positive=True)
    m = CONST_S["m"]
    d = sp.expand(a - b)
    if d == 0:
        return True
    # replace sqrt(m^2+pi^2) by a symbol and clear the algebraic dependency
    d = d.subs(eps_prime_sym(), eps)
    d = sp.together(d)
    n, _ = sp.fraction(d)
    n = sp.expand(n)
    n = sp.expand(n.subs(sum(p ** 2 for p in PI_S), eps ** 2 - m ** 2))
    if n == 0:
        return True
    # reduce the polynomial modulo eps^2 = m^2 + pi^2
    poly = sp.Poly(n, eps)
    rem = sp.rem(poly, sp.Poly(eps ** 2 - m ** 2 - sum(p ** 2 for p in PI_S), eps))
    return sp.expand(rem.as_expr()) == 0


def truncate_deriv(expr: sp.Expr, max_order: int) -> sp.Expr:
    """Drop terms containing a jet of derivative order above ``max_order``."""
    drop = {s: 0 for s in expr.free_symbols if jet_order(s) > max_order}
    return sp.expand(expr.subs(drop)) if drop else sp.expand(expr)


def drop_time_derivatives(expr: sp.Expr) -> sp.Expr:
    drop = {s: 0 for s in expr.free_symbols if s in _sym_jets and _sym_jets[s][5] > 0}
    return sp.expand(expr.subs(drop)) if drop else expr


# ------------------------------------------------------------- classical goldens

def _vec(field):
    return tuple(field_symbol(field, k) for k in (1, 2, 3))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _grad(f):
    return tuple(cderiv(f, k) for k in (1, 2, 3))


def current_density_sym():
    Bv, E = _vec("B"), _vec("E")
    curl = (cderiv(Bv[2], 2) - cderiv(Bv[1], 3), cderiv(Bv[0], 3) - cderiv(Bv[2], 1),
            cderiv(Bv[1], 1) - cderiv(Bv[0], 2))
    return tuple((curl[k] - cderiv(E[k], 0)) / (4 * sp.pi) for k in range(3))


def eq37_sym():
    """Eq. (37) (j per ledger D2)."""
    m, e, mu1 = CONST_S["m"], CONST_S["e"], CONST_S["mu1"]
    ep = eps_prime_sym()
    mu0m = e / 2
    p, E, Bv, xi = PI_S, _vec("E"), _vec("B"), XI_S
    j = current_density_sym()
    A = (mu0m / (ep + m) + mu1) / ep
    F2 = (2 * ep ** 2 + 2 * ep * m + m ** 2) / (ep ** 4 * (ep + m) ** 2)
    lap = tuple(sum(cderiv(cderiv(E[k], i), i) for i in (1, 2, 3)) for k in range(3))
    gso = _grad(_dot(xi, _cross(p, E)))
    pE = _dot(p, E)
    pgg = tuple(sum(p[i] * cderiv(cderiv(pE, k + 1), i + 1) for i in range(3)) for k in range(3))
    gxH = _grad(_dot(xi, Bv))
    gHp = _grad(_dot(Bv, p))
    gjp = _grad(_dot(j, p))
    lor = _cross(p, Bv)
    return tuple(sp.expand(e * E[k] + e / ep * lor[k] - sp.Rational(1, 2) * A * (2 * gso[k] - lap[k])
                           - mu0m / 4 * F2 * pgg[k] + (mu0m / ep + mu1) * gxH[k]
                           - mu1 / (ep * (ep + m)) * (_dot(xi, p) * gHp[k] + 2 * sp.pi * gjp[k]))
                 for k in range(3))


def eq38_sym():
    """Eq. (38)."""
    m, e, mu1, G, C1, C2 = (CONST_S[n] for n in ("m", "e", "mu1", "G", "C1", "C2"))
    ep = eps_prime_sym()
    mu0m = e / 2
    p, E, Bv, xi, xip = PI_S, _vec("E"), _vec("B"), XI_S, XIP_S
    n = field_symbol("n")
    t1 = _cross(xi, _cross(E, p))
    t2 = _cross(xi, Bv)
    t3 = _cross(xi, p)
    t4 = _cross(xi, _cross(xip, _grad(n)))
    return tuple(sp.expand(2 * (mu0m / (ep + m) + mu1) / ep * t1[k] + 2 * (mu0m / ep + mu1) * t2[k]
                           - 2 * mu1 / (ep * (ep + m)) * _dot(Bv, p) * t3[k]
                           - G / (sp.sqrt(2) * ep) * (2 * C1 * t3[k] * n + C2 * t4[k]))
                 for k in range(3))
