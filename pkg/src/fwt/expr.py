"""Noncommutative operator expressions kept in normal form.

A term is ``coef * i**imag * (constant monomial) * e_basis * jets * pi-word * T**n * F``
where jets sit left of the sorted kinetic momenta ``pi_k``, ``T`` stands for the
right-acting ``i d/dt`` and ``F`` is an optional function of an even operator (the
"core" ``A``) written as ``R(x) * g**half`` with ``x = sqrt(A)`` and
``g = (2x(x+m))**-1/2``.  Every constructor and product returns normal form, so
equality of expressions is equality of term dictionaries.

Reordering ``F(A) Z`` uses ``F(A) Z = sum_k ad_A^k(Z) F^(k)(A) / k!``; each ``ad_A``
raises the field or derivative grade, so the sum terminates under a policy.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import sympy as sp

from . import basis as B
from . import jets as J
from .errors import MixedCores, SeriesDivergence, SeriesNotRequested
from .policy import TruncationPolicy, current

CONSTS = ("m", "e", "mu1", "G", "C1", "C2", "pinum", "s2")
M, E, MU1, G, C1, C2, PINUM, S2 = range(8)
NO_CONSTS = (0,) * 8

IM, CO, BA, JE, PI, NT, FU = range(7)

X = sp.Symbol("x", positive=True)
MS = sp.Symbol("m", positive=True)

MAX_SERIES = 16


# ---------------------------------------------------------------- scalars

class ScalarCoeff:
    """``rational * i**i_power * prod(const**power)`` with ``s2 = sqrt(2)``."""

    __slots__ = ("rational", "i_power", "const_powers")

    def __init__(self, rational, i_power: int = 0, const_powers: dict | None = None):
        q = Fraction(rational)
        p = i_power % 4
        if p >= 2:
            q, p = -q, p - 2
        c = [0] * 8
        for name, k in (const_powers or {}).items():
            if name == "mu0":
                c[E] += k
                c[M] -= k
                q /= Fraction(2) ** k
            else:
                c[CONSTS.index(name)] += k
        if c[S2] < 0 or c[S2] >= 2:
            h, r = divmod(c[S2], 2)
            q *= Fraction(2) ** h
            c[S2] = r
        self.rational, self.i_power, self.const_powers = q, p, tuple(c)

    def __repr__(self):
        return f"ScalarCoeff({self.rational}, i^{self.i_power}, {dict(zip(CONSTS, self.const_powers))})"


def _cmul(c1, c2):
    s = [a + b for a, b in zip(c1, c2)]
    fac = 1
    if s[S2] >= 2:
        h, s[S2] = divmod(s[S2], 2)
        fac = 2 ** h
    return tuple(s), fac


def _ipow(p):
    p %= 4
    return p & 1, (-1 if p >= 2 else 1)


# ---------------------------------------------------------------- grading

def grade(key) -> tuple[int, int, int, int]:
    jets = key[JE]
    return len(jets), sum(J.order(j) for j in jets), key[CO][G], key[CO][M]


@lru_cache(maxsize=None)
def _zero_mask(zero_consts):
    return tuple(CONSTS.index(n) for n in zero_consts)


def _admits(key, pol: Optional[TruncationPolicy]) -> bool:
    if pol is None:
        return True
    if pol.zero_consts and any(key[CO][i] for i in _zero_mask(pol.zero_consts)):
        return False
    return pol.admits(*grade(key))


# ---------------------------------------------------------------- normal ordering

def _rank(a):
    if a[0] == "j":
        return (0, 0)
    if a[0] == "p":
        return (1, a[1])
    return (2, 0)


def _corrections(a, b):
    """Terms of ``[a, b]`` for an out-of-order pair: (coef, e_power, i_power, atom)."""
    out = []
    if a[0] == "p" and b[0] == "j":
        for c, dj in J.derivative(b[1], a[1]):
            out.append((c, 0, 3, ("j", dj)))
    elif a[0] == "t" and b[0] == "j":
        for c, dj in J.derivative(b[1], 0):
            out.append((c, 0, 1, ("j", dj)))
    elif a[0] == "t" and b[0] == "p":
        k = b[1]
        out.append((Fraction(1), 1, 1, ("j", J.make(J.EFIELD, k))))
        for c, dj in J.derivative(J.make(J.PHI), k):
            out.append((c, 1, 1, ("j", dj)))
    elif a[0] == "p" and b[0] == "p":
        j, i = a[1], b[1]
        k = 6 - i - j
        out.append((Fraction(J.levi(j, i, k)), 1, 1, ("j", J.make(J.BFIELD, k))))
    return out


@lru_cache(maxsize=None)
def _normal(word: tuple, fcap, dcap) -> tuple:
    njet = 0
    nder = 0
    for a in word:
        if a[0] == "j":
            njet += 1
            nder += J.order(a[1])
    if (fcap is not None and njet > fcap) or (dcap is not None and nder > dcap):
        return ()
    pos = -1
    for i in range(len(word) - 1):
        if _rank(word[i]) > _rank(word[i + 1]):
            pos = i
            break
    if pos < 0:
        jets = tuple(sorted(a[1] for a in word if a[0] == "j"))
        pis = tuple(a[1] for a in word if a[0] == "p")
        nt = sum(1 for a in word if a[0] == "t")
        return (((jets, pis, nt, 0, 0), Fraction(1)),)
    a, b = word[pos], word[pos + 1]
    out: dict = {}

    def add(res, coef, epow, ipow):
        for k, v in res:
            kk = (k[0], k[1], k[2], k[3] + epow, (k[4] + ipow) % 4)
            out[kk] = out.get(kk, 0) + coef * v

    add(_normal(word[:pos] + (b, a) + word[pos + 2:], fcap, dcap), 1, 0, 0)
    for coef, epow, ipow, atom in _corrections(a, b):
        add(_normal(word[:pos] + (atom,) + word[pos + 2:], fcap, dcap), coef, epow, ipow)
    return tuple((k, v) for k, v in out.items() if v)


def _caps(pol, consts, jets1):
    if pol is None:
        return None, None
    f = pol.max_field_degree
    if pol.inv_mass_order is not None:
        nr = pol.inv_mass_order + consts[M]
        f = nr if f is None else min(f, nr)
    if f is not None:
        f -= len(jets1)
    d = pol.max_deriv_order
    if d is not None:
        d -= sum(J.order(j) for j in jets1)
    return f, d


@lru_cache(maxsize=500000)
def _mul_ff(k1, k2, pol) -> tuple:
    """Product of two function-free normal-ordered terms (unit coefficients)."""
    b, ph = B.multiply(k1[BA], k2[BA])
    consts, fac = _cmul(k1[CO], k2[CO])
    if pol is not None and pol.max_weak_degree is not None and consts[G] > pol.max_weak_degree:
        return ()
    fcap, dcap = _caps(pol, consts, k1[JE])
    if (fcap is not None and fcap < 0) or (dcap is not None and dcap < 0):
        return ()
    word = (tuple(("p", k) for k in k1[PI]) + (("t",),) * k1[NT]
            + tuple(("j", x) for x in k2[JE]) + tuple(("p", k) for k in k2[PI]) + (("t",),) * k2[NT])
    res: dict = {}
    mask = _zero_mask(pol.zero_consts) if pol is not None else ()
    if mask and any(consts[i] for i in mask):
        return ()
    base_i = k1[IM] + k2[IM] + ph
    for (jets, pis, nt, epow, ipow), v in _normal(word, fcap, dcap):
        cc = consts
        if epow:
            cc = consts[:E] + (consts[E] + epow,) + consts[E + 1:]
        imag, sign = _ipow(base_i + ipow)
        key = (imag, cc, b, tuple(sorted(k1[JE] + jets)), pis, nt, None)
        if mask and any(cc[i] for i in mask):
            continue
        res[key] = res.get(key, 0) + sign * fac * v
    return tuple((k, v) for k, v in res.items() if v)


# ---------------------------------------------------------------- functions of even operators

class _Core:
    __slots__ = ("id", "expr", "items", "reducible", "rest")

    def __init__(self, cid, expr):
        self.id = cid
        self.expr = expr
        self.items = tuple(expr._t.items())
        lead = (0, NO_CONSTS, 0, (), (3, 3), 0, None)
        self.reducible = expr._t.get(lead) == 1
        self.rest = tuple((k, v) for k, v in self.items if k != lead) if self.reducible else ()


_core_lock = threading.Lock()
_core_ids: dict = {}
_cores: list = []


def register_core(expr: "OperatorExpr") -> int:
    fk = frozenset(expr._t.items())
    with _core_lock:
        cid = _core_ids.get(fk)
        if cid is None:
            cid = len(_cores)
            _cores.append(_Core(cid, expr))
            _core_ids[fk] = cid
    return cid


def core_expr(cid: int) -> "OperatorExpr":
    return _cores[cid].expr


_G_LOG_D = -(2 * X + MS) / (4 * X ** 2 * (X + MS))


@lru_cache(maxsize=None)
def _fderiv(F):
    cid, R, h = F
    d = sp.diff(R, X) / (2 * X)
    if h:
        d = d + R * _G_LOG_D
    return (cid, sp.cancel(d), h)


@lru_cache(maxsize=None)
def _fscale(F, q):
    return (F[0], sp.cancel(F[1] * q), F[2])


@lru_cache(maxsize=None)
def _fcombine(F1, F2):
    if F1[0] != F2[0]:
        raise MixedCores("product of functions of different even operators")
    R = F1[1] * F2[1]
    h = F1[2] + F2[2]
    if h == 2:
        R = R / (2 * X * (X + MS))
        h = 0
    return (F1[0], sp.cancel(R), h)


@lru_cache(maxsize=None)
def canon_R(R):
    """Unique representative of a rational function of ``x, m``: reduced fraction with
    expanded numerator and a denominator whose leading coefficient is 1."""
    R = sp.cancel(sp.sympify(R))
    if R == 0:
        return sp.Integer(0)
    n, d = sp.fraction(R)
    pd = sp.Poly(d, X, MS)
    lc = pd.LC()
    pn = sp.Poly(n, X, MS)
    return sp.expand(pn.as_expr() / lc) / sp.expand(pd.as_expr() / lc)


def _m_monomial(R):
    """Return ``(Fraction, k)`` if ``R == c * m**k``, else None."""
    c, rest = R.as_coeff_Mul()
    if rest == 1:
        k = 0
    elif rest == MS:
        k = 1
    elif rest.is_Pow and rest.base == MS and rest.exp.is_Integer:
        k = int(rest.exp)
    else:
        return None
    if not c.is_Rational:
        return None
    return Fraction(int(c.p), int(c.q)), k


def _attach(key, coef, F, pol, out):
    """Add ``coef * term(key) * F`` to ``out`` in normal form."""
    if F is None:
        if _admits(key, pol):
            out[key] = out.get(key, 0) + coef
        return
    cid, R, h = F
    consts = key[CO]
    if consts[M]:
        R = R * MS ** consts[M]
        consts = (0,) + consts[1:]
    R = canon_R(R)
    if R == 0:
        return
    if h == 0 and X not in R.free_symbols:
        mono = _m_monomial(R)
        if mono is not None:
            q, k = mono
            kk = (key[IM], (k,) + consts[1:], key[BA], key[JE], key[PI], key[NT], None)
            if _admits(kk, pol):
                out[kk] = out.get(kk, 0) + coef * q
            return
    core = _cores[cid]
    if core.reducible and key[NT] == 0 and key[PI].count(3) >= 2:
        # pi_3^2 F(A) = x^2 F(A) - (A - pi_3^2) F(A)
        L = (key[IM], consts, key[BA], key[JE], key[PI][:-2], 0, None)
        _attach(L, coef, (cid, R * X ** 2, h), pol, out)
        for k2, v2 in core.rest:
            for k3, v3 in _mul_ff(L, k2, pol):
                _attach(k3, -coef * v2 * v3, (cid, R, h), pol, out)
        return
    kk = (key[IM], consts, key[BA], key[JE], key[PI], key[NT], (cid, R, h))
    if _admits(kk, pol):
        out[kk] = out.get(kk, 0) + coef


@lru_cache(maxsize=100000)
def _reorder(F, Z, pol):
    """``F(A) Z = sum_k ad_A^k(Z) F^(k)(A) / k!`` as ((ad^k items), F_k) pairs."""
    core = _cores[F[0]]
    cur = {Z: Fraction(1)}
    out = [(tuple(cur.items()), F)]
    Fd = F
    k = 0
    while True:
        nxt: dict = {}
        for kz, vz in cur.items():
            for ka, va in core.items:
                for kk, vv in _mul_ff(ka, kz, pol):
                    nxt[kk] = nxt.get(kk, 0) + va * vz * vv
                for kk, vv in _mul_ff(kz, ka, pol):
                    nxt[kk] = nxt.get(kk, 0) - va * vz * vv
        nxt = {kk: v for kk, v in nxt.items() if v and _admits(kk, pol)}
        if not nxt:
            break
        if pol is None or not pol.bounded:
            raise SeriesNotRequested("commutator with a function of an even operator needs a truncation policy")
        k += 1
        if k > MAX_SERIES:
            raise SeriesDivergence("reordering series did not terminate under the policy")
        Fd = _fderiv(Fd)
        out.append((tuple(nxt.items()), _fscale(Fd, sp.Rational(1, math.factorial(k)))))
        cur = nxt
    return tuple(out)


@lru_cache(maxsize=500000)
def _mul_terms(k1, k2, pol) -> tuple:
    F1, F2 = k1[FU], k2[FU]
    L = k1[:FU] + (None,)
    Z = k2[:FU] + (None,)
    out: dict = {}
    if F1 is None:
        for k, v in _mul_ff(L, Z, pol):
            _attach(k, v, F2, pol, out)
    else:
        for items, Fk in _reorder(F1, Z, pol):
            Fc = Fk if F2 is None else _fcombine(Fk, F2)
            for kz, vz in items:
                for k, v in _mul_ff(L, kz, pol):
                    _attach(k, v * vz, Fc, pol, out)
    return tuple((k, v) for k, v in out.items() if v)


# ---------------------------------------------------------------- expressions

class OperatorExpr:
    """Immutable sum of normal-ordered terms."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: dict | None = None):
        t = {k: v for k, v in (terms or {}).items() if v}
        if any(k[FU] is not None for k in t):
            t = _merge_functions(t)
        self._t = t
        self._hash = None

    # construction helpers
    @classmethod
    def _term(cls, key, coef=1):
        out: dict = {}
        if key[FU] is None:
            out[key] = Fraction(coef)
        else:
            _attach(key[:FU] + (None,), Fraction(coef), key[FU], None, out)
        return cls(out)

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = scalar(other)
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = scalar(other)
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        t = dict(self._t)
        for k, v in other._t.items():
            t[k] = t.get(k, 0) + v
        return OperatorExpr(t)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return OperatorExpr({k: v * q for k, v in self._t.items()})
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        out = one()
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        from .dsl import print_expr
        return f"OperatorExpr({print_expr(self)})"

    def __str__(self):
        from .dsl import print_expr
        return print_expr(self)

    def map_terms(self, fn) -> "OperatorExpr":
        t: dict = {}
        for k, v in self._t.items():
            for k2, v2 in fn(k, v):
                t[k2] = t.get(k2, 0) + v2
        return OperatorExpr(t)

    def filter(self, pred) -> "OperatorExpr":
        return OperatorExpr({k: v for k, v in self._t.items() if pred(k)})


def _merge_functions(t: dict) -> dict:
    """Fold coefficients of function terms into ``R`` and merge terms that differ only
    in ``R``, so the representation is unique."""
    out: dict = {}
    groups: dict = {}
    free: list = []
    cores_of: dict = {}
    for k, v in t.items():
        F = k[FU]
        if F is None:
            free.append((k, v))
            continue
        base = k[:FU] + ((F[0], F[2]),)
        groups[base] = groups.get(base, 0) + F[1] * sp.Rational(v.numerator, v.denominator)
        if F[2] == 0:
            cores_of.setdefault(k[:FU], []).append(F[0])
    # a function-free term with the same base as an h = 0 function term is part of
    # that function's R (lowest core id if several), so the split is unique
    for k, v in free:
        c = k[CO]
        plain = k[:CO] + ((0,) + c[1:],) + k[CO + 1:FU]
        cids = cores_of.get(plain)
        if cids:
            base = plain + ((min(cids), 0),)
            groups[base] = groups[base] + sp.Rational(v.numerator, v.denominator) * MS ** c[M]
        else:
            out[k] = out.get(k, 0) + v
    for base, R in groups.items():
        cid, h = base[FU]
        R = canon_R(R)
        if R == 0:
            continue
        if h == 0 and X not in R.free_symbols and R.is_polynomial(MS):
            c = base[CO]
            for (mk,), q in sp.Poly(R, MS).terms():
                kk = base[:CO] + ((c[M] + mk,) + c[1:],) + base[CO + 1:FU] + (None,)
                out[kk] = out.get(kk, 0) + Fraction(int(q.p), int(q.q))
            continue
        if h == 0 and X not in R.free_symbols:
            mono = _m_monomial(R)
            if mono is not None:
                q, mk = mono
                c = base[CO]
                kk = base[:CO] + ((c[M] + mk,) + c[1:],) + base[CO + 1:FU] + (None,)
                out[kk] = out.get(kk, 0) + q
                continue
        out[base[:FU] + ((cid, R, h),)] = Fraction(1)
    return {k: v for k, v in out.items() if v}


def multiply(a: OperatorExpr, b: OperatorExpr, policy: Optional[TruncationPolicy] = None) -> OperatorExpr:
    pol = policy if policy is not None else current()
    t: dict = {}
    for k1, v1 in a._t.items():
        for k2, v2 in b._t.items():
            for k, v in _mul_terms(k1, k2, pol):
                t[k] = t.get(k, 0) + v1 * v2 * v
    return OperatorExpr(t)


def zero() -> OperatorExpr:
    return OperatorExpr()


def scalar(q=1, imag: int = 0, **consts) -> OperatorExpr:
    sc = ScalarCoeff(q, imag, consts)
    if sc.rational == 0:
        return zero()
    return OperatorExpr({(sc.i_power, sc.const_powers, 0, (), (), 0, None): sc.rational})


def one() -> OperatorExpr:
    return scalar(1)


I = scalar(1, 1)


def const(name: str, power: int = 1) -> OperatorExpr:
    return scalar(1, **{name: power})


def mat(spec: tuple[int, int]) -> OperatorExpr:
    idx, p = spec
    imag, sign = _ipow(p)
    return OperatorExpr({(imag, NO_CONSTS, idx, (), (), 0, None): Fraction(sign)})


def pi(k: int) -> OperatorExpr:
    return OperatorExpr({(0, NO_CONSTS, 0, (), (k,), 0, None): Fraction(1)})


def dt_op() -> OperatorExpr:
    """The right-acting operator ``i d/dt``."""
    return OperatorExpr({(0, NO_CONSTS, 0, (), (), 1, None): Fraction(1)})


def jet(field: int | str, comp: int = 0, d=(0, 0, 0), dt: int = 0) -> OperatorExpr:
    if isinstance(field, str):
        field = J.FIELD_CODES[field]
    t: dict = {}
    for c, j in J.reduce(J.make(field, comp, d, dt)):
        k = (0, NO_CONSTS, 0, (j,), (), 0, None)
        t[k] = t.get(k, 0) + c
    return OperatorExpr(t)


def is_even(x: OperatorExpr) -> bool:
    return all(B.is_even(k[BA]) for k in x._t)


def is_function_free(x: OperatorExpr) -> bool:
    return all(k[FU] is None for k in x._t)


def func_of_even(core: OperatorExpr, R, half: int = 0) -> OperatorExpr:
    """``R(x) * g**half`` of the even operator ``core`` with ``x = sqrt(core)``."""
    if not is_even(core):
        raise ValueError("function core must commute with beta")
    if not is_function_free(core):
        raise ValueError("function core may not itself contain functions")
    cid = register_core(core)
    R = sp.sympify(R).subs({sp.Symbol("x"): X, sp.Symbol("m"): MS})
    return OperatorExpr._term((0, NO_CONSTS, 0, (), (), 0, (cid, sp.cancel(R), half)))


def truncate(x: OperatorExpr, policy: Optional[TruncationPolicy]) -> OperatorExpr:
    if policy is None:
        return x
    return OperatorExpr({k: v for k, v in x._t.items() if _admits(k, policy)})


def canonicalize(x) -> OperatorExpr:
    """Normal form of an expression or of an iterable of ordered factor lists.

    An ``OperatorExpr`` is rebuilt term by term through the product machinery,
    which is idempotent on normal forms.  A list of factor lists is read as a sum
    of ordered products.
    """
    if isinstance(x, OperatorExpr):
        out = zero()
        for k, v in x._t.items():
            out = out + _rebuild(k) * v
        return out
    total = zero()
    for factors in x:
        prod = one()
        for f in factors:
            prod = prod * (f if isinstance(f, OperatorExpr) else scalar(f))
        total = total + prod
    return total


def _rebuild(k) -> OperatorExpr:
    out = scalar(1, k[IM]) * OperatorExpr({(0, k[CO], 0, (), (), 0, None): Fraction(1)})
    out = out * mat((k[BA], 0))
    for j in k[JE]:
        out = out * jet(j[0], j[1], j[2:5], j[5])
    for p in k[PI]:
        out = out * pi(p)
    for _ in range(k[NT]):
        out = out * dt_op()
    if k[FU] is not None:
        out = out * OperatorExpr._term((0, NO_CONSTS, 0, (), (), 0, k[FU]))
    return out


def commutator(a: OperatorExpr, b: OperatorExpr, policy=None) -> OperatorExpr:
    return multiply(a, b, policy) - multiply(b, a, policy)


def anticommutator(a: OperatorExpr, b: OperatorExpr, policy=None) -> OperatorExpr:
    return multiply(a, b, policy) + multiply(b, a, policy)


def adjoint(x: OperatorExpr, policy=None) -> OperatorExpr:
    """Hermitian conjugate: jets real, pi and i d/dt and functions Hermitian."""
    pol = policy if policy is not None else current()
    out = zero()
    for k, v in x._t.items():
        imag = k[IM]
        sign = -1 if imag else 1
        acc = OperatorExpr({(imag, k[CO], 0, (), (), 0, None): Fraction(v * sign)})
        if k[FU] is not None:
            acc = multiply(acc, OperatorExpr._term((0, NO_CONSTS, 0, (), (), 0, k[FU])), pol)
        for _ in range(k[NT]):
            acc = multiply(acc, dt_op(), pol)
        for p in reversed(k[PI]):
            acc = multiply(acc, pi(p), pol)
        for j in k[JE]:
            acc = multiply(acc, jet(j[0], j[1], j[2:5], j[5]), pol)
        acc = multiply(acc, mat((k[BA], 0)), pol)
        out = out + acc
    return out


def substitute_consts(x: OperatorExpr, **values) -> OperatorExpr:
    """Set constants to rational values (e.g. ``mu1=0``)."""
    idx = {CONSTS.index(n): Fraction(v) for n, v in values.items()}
    t: dict = {}
    for k, v in x._t.items():
        c = list(k[CO])
        q = v
        for i, val in idx.items():
            if c[i]:
                if val == 0:
                    q = 0
                    break
                q *= val ** c[i]
                c[i] = 0
        if q:
            kk = k[:CO] + (tuple(c),) + k[CO + 1:]
            t[kk] = t.get(kk, 0) + q
    return OperatorExpr(t)


def drop_jets(x: OperatorExpr, pred) -> OperatorExpr:
    """Remove every term containing a jet for which ``pred(jet)`` is true."""
    return x.filter(lambda k: not any(pred(j) for j in k[JE]))


def drop_pi(x: OperatorExpr, axis: int) -> OperatorExpr:
    """Set the kinetic momentum component ``pi_axis`` to zero (a conserved P_axis = 0)."""
    return x.filter(lambda k: axis not in k[PI])
