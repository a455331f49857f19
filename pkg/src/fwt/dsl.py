"""Text grammar for Hamiltonians (``.fwh``) and the text / LaTeX printers.

Grammar (one-token lookahead, recursive descent)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := ('-' | '+') factor | dotted
    dotted  := power ('.' power)?              # vector dot product
    power   := primary ('^' ['-'] INT)?
    primary := NUMBER | IDENT | IDENT '(' args ')' | '(' expr ')'

Atoms: ``beta gamma5 i m e mu0 mu1 G C1 C2 Phi n eps epsP pinum idt`` and the
vectors ``alpha gamma Sigma Pi sigmam pi p E B j`` (component ``X_k``, k = 1..3).
``p`` is read as ``pi`` (the canonical momentum of a field-free term), ``idt`` is
the right-acting ``i d/dt`` and ``pinum`` the number pi.  Calls: ``comm acomm sqrt
inv ddt grad div curl cross d1 d2 d3``.  The vector potential enters only through
``pi = p - eA``; a bare ``A`` is rejected.

A ``.fwh`` file is either a bare expression or has ``[constants]``, ``[options]``
and ``[hamiltonian]`` sections (``#`` starts a comment).

The text printer emits the grammar, so ``parse(print(x)) == x`` for every
canonical expression.  Functions of an even operator ``A`` print with explicit
radicals: ``R(x) g**h`` with ``x = sqrt(A)`` becomes ``(N)/(D)`` in ``sqrt(A)``
times ``inv(sqrt(2*sqrt(A)*(sqrt(A) + m)))`` when ``h = 1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce as _reduce
from math import gcd, isqrt

import sympy as sp

from . import basis as B
from . import builders as bl
from . import jets as J
from .errors import FWError, ParseError, UnknownSymbol
from .expr import (BA, CO, CONSTS, FU, IM, JE, M, MS, NT, PI, X, OperatorExpr, anticommutator, commutator,
                   core_expr, dt_op, drop_jets, func_of_even, is_even, is_function_free, jet, mat, one,
                   pi, register_core, scalar, substitute_consts, zero)

__all__ = ["parse_expr", "parse_hamiltonian", "parse_source", "print_expr", "latex_document", "HamSource"]

# ---------------------------------------------------------------- tokens

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<id>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^.(),])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str, line0: int = 1) -> list[_Tok]:
    toks = []
    line, lstart, pos = line0, 0, 0
    while pos < len(src):
        mt = _TOKEN.match(src, pos)
        if mt is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - lstart + 1,
                             ("number", "identifier", "operator"))
        kind = mt.lastgroup
        if kind == "nl":
            line += 1
            lstart = mt.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, mt.group(), line, pos - lstart + 1))
        pos = mt.end()
    toks.append(_Tok("eof", "", line, pos - lstart + 1))
    return toks


# ---------------------------------------------------------------- atoms

_VECTOR_MATS = {"alpha": B.alpha, "gamma": B.gamma, "Sigma": B.Sigma, "Pi": B.Pi, "sigmam": B.sigma_matter}
_CONST_NAMES = ("m", "e", "mu0", "mu1", "G", "C1", "C2")
_VECTOR_ATOMS = tuple(_VECTOR_MATS) + ("pi", "p", "E", "B", "j")
_SCALAR_ATOMS = ("beta", "gamma5", "i", "Phi", "n", "eps", "epsP", "pinum", "idt") + _CONST_NAMES
_CALLS = {"comm": 2, "acomm": 2, "sqrt": 1, "inv": 1, "ddt": 1, "grad": 1, "div": 1, "curl": 1, "cross": 2,
          "d1": 1, "d2": 1, "d3": 1}
_PRIMARY_START = ("number", "identifier", "(", "-", "+")


def _eps_core() -> OperatorExpr:
    return bl.prime_core() - bl.e() * bl.dot(bl.Sigma(), bl.Bfield())


def _vector_component(name: str, k: int) -> OperatorExpr:
    if name in _VECTOR_MATS:
        return mat(_VECTOR_MATS[name](k))
    if name in ("pi", "p"):
        return pi(k)
    if name == "E":
        return jet(J.EFIELD, k)
    if name == "B":
        return jet(J.BFIELD, k)
    if name == "j":
        return bl.current_density()[k - 1]
    raise KeyError(name)


def _scalar_atom(name: str) -> OperatorExpr:
    if name == "beta":
        return mat(B.beta())
    if name == "gamma5":
        return mat(B.gamma5())
    if name == "i":
        return scalar(1, 1)
    if name == "Phi":
        return jet(J.PHI)
    if name == "n":
        return jet(J.DENSITY)
    if name == "epsP":
        return func_of_even(bl.prime_core(), X)
    if name == "eps":
        return func_of_even(_eps_core(), X)
    if name == "pinum":
        return scalar(1, pinum=1)
    if name == "idt":
        return dt_op()
    return scalar(1, **{name: 1})


# ---------------------------------------------------------------- algebra on parsed values

def _pure_function(a: OperatorExpr):
    """``(cid, R, h)`` if ``a`` is a function of one even operator (scalars in ``m``
    allowed), ``(None, R, 0)`` for a polynomial in ``m``; otherwise None."""
    cid, h, R = None, None, sp.Integer(0)
    for k, v in a.items():
        if k[IM] or k[BA] or k[JE] or k[PI] or k[NT] or any(c for i, c in enumerate(k[CO]) if i != M):
            return None
        t = sp.Rational(v.numerator, v.denominator) * MS ** k[CO][M]
        if k[FU] is not None:
            c, Rk, hk = k[FU]
            if cid not in (None, c) or h not in (None, hk):
                return None
            cid, h = c, hk
            t = t * Rk
        elif h == 1:
            return None
        R += t
    if h == 1 and any(k[FU] is None for k in a._t):
        return None
    return cid, R, h or 0


def _scalar_parts(a: OperatorExpr):
    """``(rational, imag, consts)`` for a single constant term, else None."""
    if len(a) != 1:
        return None
    (k, v), = a.items()
    if k[BA] or k[JE] or k[PI] or k[NT] or k[FU] is not None:
        return None
    return v, k[IM], k[CO]


def _const_term(q, imag, consts) -> OperatorExpr:
    return OperatorExpr({(imag, tuple(consts), 0, (), (), 0, None): Fraction(q)})


def _invert(a: OperatorExpr) -> OperatorExpr:
    sp_ = _scalar_parts(a)
    if sp_ is not None:
        q, imag, consts = sp_
        inv = [-c for c in consts]
        out = _const_term(1 / q, 0, inv)
        if consts[7]:  # 1/sqrt2 = sqrt2/2
            out = _const_term(Fraction(1, 2 * q), 0, [*inv[:7], 1])
        return out * scalar(1, 3) if imag else out
    pf = _pure_function(a)
    if pf is not None and pf[0] is not None:
        cid, R, h = pf
        Rinv = 1 / R
        if h:
            Rinv = Rinv * 2 * X * (X + MS)
        return func_of_even(core_expr(cid), Rinv, h)
    if pf is not None:
        raise ValueError("inverse of a polynomial in m is not representable")
    if is_even(a) and is_function_free(a) and a:
        return func_of_even(a, 1 / X ** 2)
    raise ValueError("operand is not invertible in the algebra")


def _rational_sqrt(q: Fraction):
    """``(r, s2)`` with ``sqrt(q) = r * sqrt(2)**s2`` or None."""
    if q < 0:
        return None
    for s2, base in ((0, q), (1, q / 2)):
        n, d = base.numerator, base.denominator
        if isqrt(n) ** 2 == n and isqrt(d) ** 2 == d:
            return Fraction(isqrt(n), isqrt(d)), s2
    return None


def _is_rational_function(r) -> bool:
    return r.is_rational_function(X, MS)


def _sqrt(a: OperatorExpr) -> OperatorExpr:
    sp_ = _scalar_parts(a)
    if sp_ is not None:
        q, imag, consts = sp_
        rs = _rational_sqrt(q)
        if imag or rs is None or consts[7] or any(c % 2 for c in consts[:7]):
            raise ValueError("square root of this constant is not representable")
        r, s2 = rs
        return _const_term(r, 0, [c // 2 for c in consts[:7]] + [s2])
    pf = _pure_function(a)
    if pf is not None and pf[0] is not None:
        cid, R, h = pf
        if h == 0:
            r = sp.powsimp(sp.sqrt(sp.factor(R)), force=True)
            if _is_rational_function(r):
                return func_of_even(core_expr(cid), r, 0)
            w = 2 * X * (X + MS)
            r = sp.powsimp(sp.sqrt(sp.factor(R / w)), force=True)
            if _is_rational_function(r):
                return func_of_even(core_expr(cid), r * w, 1)
        raise ValueError("square root of this function is not representable")
    if is_even(a) and is_function_free(a) and a:
        return func_of_even(a, X)
    raise ValueError("sqrt needs a beta-even, function-free operand")


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, src: str, line0: int = 1):
        self.toks = _tokenize(src, line0)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _kind(self, t: _Tok) -> str:
        return {"num": "number", "id": "identifier", "eof": "end of input"}.get(t.kind, t.text)

    def error(self, msg, expected=(), tok=None, cls=ParseError):
        t = tok or self.tok
        return cls(msg, t.line, t.col, expected)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            raise self.error(f"unexpected {self._kind(self.tok)!s} {self.tok.text!r}", (text,))

    # expr := term (('+'|'-') term)*
    def parse(self):
        v = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}", ("+", "-", "*", "/", "end of input"))
        return v

    def expr(self):
        v = self.term()
        while True:
            t = self.tok
            if self.accept("+"):
                v = self._add(v, self.term(), t)
            elif self.accept("-"):
                v = self._add(v, self._neg(self.term()), t)
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            t = self.tok
            if self.accept("*"):
                v = self._mul(v, self.factor(), t)
            elif self.accept("/"):
                d = self._scalar(self.factor(), t)
                try:
                    v = self._mul(v, _invert(d), t)
                except (ValueError, FWError) as exc:
                    raise self.error(f"cannot divide: {exc}", tok=t) from None
            else:
                return v

    def factor(self):
        if self.accept("-"):
            return self._neg(self.factor())
        if self.accept("+"):
            return self.factor()
        return self.dotted()

    def dotted(self):
        v = self.power()
        t = self.tok
        if self.accept("."):
            w = self.power()
            if not (isinstance(v, tuple) and isinstance(w, tuple)):
                raise self.error("'.' needs vector operands", ("vector",), t)
            return bl.dot(v, w)
        return v

    def power(self):
        v = self.primary()
        t = self.tok
        if self.accept("^"):
            neg = self.accept("-")
            if self.tok.kind != "num" or "." in self.tok.text:
                raise self.error("exponent must be an integer", ("integer",))
            k = int(self.tok.text)
            self.i += 1
            base = self._scalar(v, t)
            if neg:
                try:
                    base = _invert(base)
                except (ValueError, FWError) as exc:
                    raise self.error(f"cannot invert: {exc}", tok=t) from None
            out = one()
            for _ in range(k):
                out = out * base
            return out
        return v

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return scalar(Fraction(t.text))
        if self.accept("("):
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "id":
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(t)
            return self.atom(t)
        raise self.error(f"unexpected {self._kind(t)} {t.text!r}", _PRIMARY_START)

    def atom(self, t: _Tok):
        name = t.text
        mt = re.fullmatch(r"([A-Za-z][A-Za-z0-9]*)_([123])", name)
        if mt and mt.group(1) in _VECTOR_ATOMS:
            return _vector_component(mt.group(1), int(mt.group(2)))
        if name in _VECTOR_ATOMS:
            return tuple(_vector_component(name, k) for k in (1, 2, 3))
        if name in _SCALAR_ATOMS:
            return _scalar_atom(name)
        if name == "A" or (mt and mt.group(1) == "A"):
            raise self.error("the vector potential enters only through pi = p - e A", tok=t, cls=UnknownSymbol)
        if name in _CALLS:
            raise self.error(f"{name} needs arguments", ("(",))
        raise self.error(f"unknown symbol {name!r}", tok=t, cls=UnknownSymbol)

    def call(self, t: _Tok):
        name = t.text
        if name not in _CALLS:
            raise self.error(f"unknown function {name!r}", tok=t, cls=UnknownSymbol)
        self.expect("(")
        args = [self.expr()]
        while len(args) < _CALLS[name]:  # arity is checked token by token
            self.expect(",")
            args.append(self.expr())
        self.expect(")")
        try:
            return self._apply(name, args, t)
        except ParseError:
            raise
        except (ValueError, FWError) as exc:
            raise self.error(f"{name}: {exc}", tok=t) from None

    def _apply(self, name, args, t):
        if name in ("comm", "acomm"):
            a, b = (self._scalar(x, t) for x in args)
            return commutator(a, b) if name == "comm" else anticommutator(a, b)
        if name == "sqrt":
            return _sqrt(self._scalar(args[0], t))
        if name == "inv":
            return _invert(self._scalar(args[0], t))
        if name == "cross":
            a, b = args
            if not (isinstance(a, tuple) and isinstance(b, tuple)):
                raise self.error("cross needs vector operands", ("vector",), t)
            return bl.cross(a, b)
        if name == "grad":
            return bl.grad(self._scalar(args[0], t))
        if name == "div":
            return bl.div(self._vector(args[0], t))
        if name == "curl":
            return bl.curl(self._vector(args[0], t))
        axis = 0 if name == "ddt" else int(name[1])
        a = args[0]
        if isinstance(a, tuple):
            return tuple(bl.deriv(x, axis) for x in a)
        return bl.deriv(a, axis)

    # value helpers
    def _scalar(self, v, t):
        if isinstance(v, tuple):
            raise self.error("expected a scalar operand, got a vector", ("scalar",), t)
        return v

    def _vector(self, v, t):
        if not isinstance(v, tuple):
            raise self.error("expected a vector operand", ("vector",), t)
        return v

    def _neg(self, v):
        return tuple(-x for x in v) if isinstance(v, tuple) else -v

    def _add(self, a, b, t):
        if isinstance(a, tuple) != isinstance(b, tuple):
            raise self.error("cannot add a vector and a scalar", tok=t)
        return bl.vadd(a, b) if isinstance(a, tuple) else a + b

    def _mul(self, a, b, t):
        if isinstance(a, tuple) and isinstance(b, tuple):
            raise self.error("use '.' or cross() to multiply vectors", (".", "cross"), t)
        if isinstance(a, tuple):
            return tuple(x * b for x in a)
        if isinstance(b, tuple):
            return tuple(a * x for x in b)
        return a * b


def parse_expr(text: str, line0: int = 1, allow_vector: bool = False):
    """Parse one expression; a vector result is an error unless ``allow_vector``."""
    p = _Parser(text, line0)
    v = p.parse()
    if isinstance(v, tuple) and not allow_vector:
        raise ParseError("expression is a vector; a scalar operator was expected", line0, 1, ("scalar",))
    return v


# ---------------------------------------------------------------- .fwh sources

_OPTION_KEYS = ("anomalous", "weak", "electric", "magnetic", "stationary")
_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


@dataclass
class HamSource:
    text: str
    constants: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    line0: int = 1


def parse_source(src: str) -> HamSource:
    """Split a ``.fwh`` file into its sections."""
    lines = src.split("\n")
    if not any(re.fullmatch(r"\s*\[[a-z]+\]\s*(#.*)?", ln) for ln in lines):
        return HamSource(src)
    section, body, line0 = None, [], None
    consts, opts = {}, {}
    for no, ln in enumerate(lines, 1):
        s = ln.split("#", 1)[0].strip()
        mt = re.fullmatch(r"\[([a-z]+)\]", s)
        if mt:
            section = mt.group(1)
            if section not in ("constants", "options", "hamiltonian"):
                raise ParseError(f"unknown section [{section}]", no, 1, ("constants", "options", "hamiltonian"))
            if section == "hamiltonian":
                line0 = no + 1
            continue
        if section == "hamiltonian":
            body.append(ln)
            continue
        if not s:
            continue
        if section is None:
            raise ParseError("text before the first section", no, 1, ("[constants]", "[options]", "[hamiltonian]"))
        key, eq, val = (x.strip() for x in s.partition("="))
        if not eq:
            raise ParseError("expected key = value", no, len(ln) - len(ln.lstrip()) + 1, ("=",))
        if section == "constants":
            if key not in ("m", "e", "mu1", "G", "C1", "C2"):
                raise UnknownSymbol(f"unknown constant {key!r}", no, 1, ("m", "e", "mu1", "G", "C1", "C2"))
            try:
                consts[key] = Fraction(val)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational value {val!r}", no, ln.index("=") + 2, ("rational",)) from None
        else:
            if key not in _OPTION_KEYS:
                raise UnknownSymbol(f"unknown option {key!r}", no, 1, _OPTION_KEYS)
            v = val.lower()
            if v not in _TRUE + _FALSE:
                raise ParseError(f"bad boolean {val!r}", no, ln.index("=") + 2, ("true", "false"))
            opts[key] = v in _TRUE
    if line0 is None:
        raise ParseError("missing [hamiltonian] section", len(lines), 1, ("[hamiltonian]",))
    return HamSource("\n".join(body), consts, opts, line0)


def parse_hamiltonian(src) -> OperatorExpr:
    """Parse a ``.fwh`` source (string or ``HamSource``) to a canonical expression."""
    hs = parse_source(src) if isinstance(src, str) else src
    x = parse_expr(hs.text, hs.line0)
    opts = hs.options
    subs = dict(hs.constants)
    if opts.get("anomalous") is False:
        subs["mu1"] = 0
    if opts.get("weak") is False:
        subs["G"] = 0
    if subs:
        if ("m" in subs or "e" in subs) and not is_function_free(x):
            raise ParseError("cannot substitute m or e inside functions of operators", hs.line0, 1)
        x = substitute_consts(x, **subs)
    if opts.get("electric") is False:
        x = drop_jets(x, lambda j: j[0] in (J.PHI, J.EFIELD))
    if opts.get("magnetic") is False:
        x = drop_jets(x, lambda j: j[0] == J.BFIELD)
    if opts.get("stationary"):
        x = drop_jets(x, lambda j: j[5] > 0)
    return x


# ---------------------------------------------------------------- printing

def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _sort_key(k):
    jets = k[JE]
    F = k[FU]
    return (len(jets), sum(J.order(j) for j in jets), k[CO][6], len(k[PI]), k[NT], -k[CO][M],
            k[BA], jets, k[PI], k[CO], k[IM], (-1, "", 0) if F is None else (F[0], str(F[1]), F[2]))


def _poly_content(n):
    """``(content, primitive)`` of a polynomial in ``x, m`` with positive leading coefficient."""
    p = sp.Poly(n, X, MS)
    cs = [Fraction(int(c.p), int(c.q)) for c in p.coeffs()]
    num = _reduce(gcd, (abs(c.numerator) for c in cs))
    den = _reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in cs))
    content = Fraction(num, den)
    if cs[0] < 0:
        content = -content
    return content, sp.expand(n / sp.Rational(content.numerator, content.denominator))


def _group(seq):
    out = []
    for s in seq:
        if out and out[-1][0] == s:
            out[-1][1] += 1
        else:
            out.append([s, 1])
    return out


class _Printer:
    def __init__(self, fmt: str):
        if fmt not in ("text", "latex"):
            raise ValueError(f"unknown format {fmt!r}")
        self.fmt = fmt
        self.tex = fmt == "latex"

    # pieces
    def pw(self, s, k):
        if k == 1:
            return s
        if self.tex:
            return f"{s}^{{{k}}}"
        return f"{s}^{k}"

    def const_factor(self, idx, k):
        name = CONSTS[idx]
        if name == "s2":
            return r"\sqrt{2}" if self.tex else "sqrt(2)"
        if self.tex:
            name = {"mu1": r"\mu'", "C1": "C_1", "C2": "C_2", "pinum": r"\pi"}.get(name, name)
            if name == r"\mu'" and k != 1:
                name = r"{\mu'}"
        elif name == "pinum":
            name = "pinum"
        return self.pw(name, k)

    def mat_name(self, nm):
        if not self.tex:
            return nm
        if nm == "beta":
            return r"\beta"
        if nm == "gamma5":
            return r"\gamma^5"
        base, k = nm.split("_")
        return {"Sigma": r"\Sigma", "Pi": r"\Pi", "alpha": r"\alpha", "gamma": r"\gamma",
                "sigmam": r"\sigma'"}[base] + f"_{{{k}}}"

    def jet_name(self, j):
        if not self.tex:
            return J.name(j)
        f, comp, d1, d2, d3, dt = j
        base = {J.PHI: r"\Phi", J.EFIELD: "E", J.BFIELD: "H", J.DENSITY: "n"}[f]
        if comp:
            base += f"_{{{comp}}}"
        ds = "".join(self.pw(rf"\partial_{{{a}}}", c) for a, c in ((1, d1), (2, d2), (3, d3)) if c)
        if dt:
            ds += self.pw(r"\partial_t", dt)
        return f"{ds} {base}" if ds else base

    def wrap(self, s):
        return rf"\left({s}\right)" if self.tex else f"({s})"

    def function_parts(self, F):
        """(rational content, list of factor strings) for ``R(x) g**h``."""
        cid, R, h = F
        core = self.expr(core_expr(cid))
        x = rf"\sqrt{{{core}}}" if self.tex else f"sqrt({core})"
        n, d = sp.fraction(R)
        content, n = _poly_content(n)
        parts = []
        ns = self.poly(n, x)
        ds = self.poly(d, x) if d != 1 else None
        if self.tex:
            if ds is not None:
                parts.append(rf"\frac{{{ns}}}{{{ds}}}")
            elif ns != "1":
                parts.append(ns if self._is_atomic_poly(n) else self.wrap(ns))
            if h:
                parts.append(rf"\frac{{1}}{{\sqrt{{2 {x} \left({x} + m\right)}}}}")
            return content, parts, None
        if ns != "1":
            parts.append(ns if self._is_atomic_poly(n) else self.wrap(ns))
        if h:
            parts.append(f"inv(sqrt(2*{x}*({x} + m)))")
        div = None
        if ds is not None:
            div = ds if self._is_atomic_poly(d) and "*" not in ds else self.wrap(ds)
        return content, parts, div

    @staticmethod
    def _is_atomic_poly(p):
        poly = sp.Poly(p, X, MS)
        return len(poly.terms()) == 1 and poly.coeffs()[0] == 1

    def poly(self, p, x):
        poly = sp.Poly(p, X, MS)
        out = []
        for (a, b), c in poly.terms():
            c = Fraction(int(c.p), int(c.q))
            fs = []
            if a:
                fs.append(self.pw(x, a))
            if b:
                fs.append(self.pw("m", b))
            out.append(self.join_term(c, fs))
        return self.join_sum(out)

    def join_term(self, c: Fraction, fs, div=None):
        sign = "-" if c < 0 else ""
        c = abs(c)
        sep = " " if self.tex else "*"
        if self.tex:
            if c == 1:
                body = sep.join(fs) if fs else "1"
            else:
                cs = str(c.numerator) if c.denominator == 1 else rf"\frac{{{c.numerator}}}{{{c.denominator}}}"
                body = sep.join([cs] + fs)
        else:
            if c == 1:
                body = sep.join(fs) if fs else "1"
            else:
                body = sep.join([_frac_str(c)] + fs)
            if div is not None:
                body = f"{body}/{div}"
        return sign + body

    @staticmethod
    def join_sum(terms):
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def term(self, k, v):
        names, ph = B.names(k[BA])
        tot = k[IM] + ph
        c = Fraction(v) * (-1 if tot % 4 >= 2 else 1)
        fs = []
        for idx in range(8):
            if k[CO][idx]:
                fs.append(self.const_factor(idx, k[CO][idx]))
        if tot % 2:
            fs.append("i")
        fs += [self.mat_name(nm) for nm in names]
        fs += [self.pw(self.jet_name(j), cnt) for j, cnt in _group(k[JE])]
        fs += [self.pw(rf"\pi_{{{p}}}" if self.tex else f"pi_{p}", cnt) for p, cnt in _group(k[PI])]
        if k[NT]:
            fs.append(self.pw(r"i\partial_t" if self.tex else "idt", k[NT]))
        div = None
        if k[FU] is not None:
            content, parts, div = self.function_parts(k[FU])
            c *= content
            fs += parts
        return self.join_term(c, fs, div)

    def expr(self, x: OperatorExpr) -> str:
        items = sorted(x.items(), key=lambda kv: _sort_key(kv[0]))
        return self.join_sum([self.term(k, v) for k, v in items])


def print_expr(x: OperatorExpr, fmt: str = "text") -> str:
    """Deterministic rendering; ``text`` output parses back to ``x``."""
    return _Printer(fmt).expr(x)


def latex_document(x: OperatorExpr, lhs: str = "H") -> str:
    """A standalone LaTeX document displaying ``lhs = x``."""
    body = print_expr(x, "latex")
    return ("\\documentclass{article}\n\\usepackage{amsmath}\n\\usepackage{breqn}\n\\begin{document}\n"
            f"\\begin{{dmath*}}\n{lhs} = {body}\n\\end{{dmath*}}\n\\end{{document}}\n")
