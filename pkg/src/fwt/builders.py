"""Vector helpers and the standard Hamiltonians built from them."""
from __future__ import annotations

from fractions import Fraction

from . import basis as B
from . import jets as J
from .expr import (CO, FU, JE, NT, PI, OperatorExpr, anticommutator, commutator, const, dt_op,
                   func_of_even, jet, mat, one, pi, scalar, zero, I)

AXES = (1, 2, 3)


def vec(fn) -> tuple:
    return tuple(fn(k) for k in AXES)


def dot(a, b) -> OperatorExpr:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def vscale(c, a) -> tuple:
    return tuple(c * x for x in a)


def vadd(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def comm(a, b):
    return commutator(a, b)


def acomm(a, b):
    return anticommutator(a, b)


# matrices
beta = lambda: mat(B.beta())  # noqa: E731
gamma5 = lambda: mat(B.gamma5())  # noqa: E731
alpha = lambda: vec(lambda k: mat(B.alpha(k)))  # noqa: E731
gamma = lambda: vec(lambda k: mat(B.gamma(k)))  # noqa: E731
Sigma = lambda: vec(lambda k: mat(B.Sigma(k)))  # noqa: E731
Pi = lambda: vec(lambda k: mat(B.Pi(k)))  # noqa: E731
sigmam = lambda: vec(lambda k: mat(B.sigma_matter(k)))  # noqa: E731

# kinetic momentum and fields
pivec = lambda: vec(pi)  # noqa: E731
Efield = lambda: vec(lambda k: jet(J.EFIELD, k))  # noqa: E731
Bfield = lambda: vec(lambda k: jet(J.BFIELD, k))  # noqa: E731
Phi = lambda: jet(J.PHI)  # noqa: E731
density = lambda: jet(J.DENSITY)  # noqa: E731

m = lambda: const("m")  # noqa: E731
e = lambda: const("e")  # noqa: E731
mu0 = lambda: const("mu0")  # noqa: E731
mu1 = lambda: const("mu1")  # noqa: E731
G = lambda: const("G")  # noqa: E731
C1 = lambda: const("C1")  # noqa: E731
C2 = lambda: const("C2")  # noqa: E731
inv_sqrt2 = lambda: scalar(Fraction(1, 2), s2=1)  # noqa: E731


def deriv(x: OperatorExpr, axis: int) -> OperatorExpr:
    """Partial derivative (axis 1..3, 0 for time) acting on the field jets of ``x``.

    Kinetic momenta in ``x`` are left untouched, i.e. the derivative acts on the
    fields only, as in the paper's ``pi . grad(pi . E)`` notation."""
    t: dict = {}
    for k, v in x.items():
        if k[NT] or k[FU] is not None:
            raise ValueError("derivative only defined on field-jet and momentum expressions")
        js = k[JE]
        for i, j in enumerate(js):
            for c, dj in J.derivative(j, axis):
                nj = tuple(sorted(js[:i] + (dj,) + js[i + 1:]))
                kk = k[:JE] + (nj,) + k[JE + 1:]
                t[kk] = t.get(kk, 0) + v * c
    return OperatorExpr(t)


def grad(f) -> tuple:
    return vec(lambda k: deriv(f, k))


def div(F) -> OperatorExpr:
    return deriv(F[0], 1) + deriv(F[1], 2) + deriv(F[2], 3)


def curl(F) -> tuple:
    return (deriv(F[2], 2) - deriv(F[1], 3), deriv(F[0], 3) - deriv(F[2], 1), deriv(F[1], 1) - deriv(F[0], 2))


def ddt(x) -> OperatorExpr:
    return deriv(x, 0)


def current_density() -> tuple:
    """External current ``j`` with ``curl B = 4 pi j + dE/dt`` (Gaussian units)."""
    quarter_pi = scalar(Fraction(1, 4), pinum=-1)
    return vec(lambda k: quarter_pi * (curl(Bfield())[k - 1] - ddt(Efield()[k - 1])))


def eps_prime() -> OperatorExpr:
    """``sqrt(m^2 + pi^2)``."""
    return func_of_even(m() * m() + dot(pivec(), pivec()), "x")


def fn_of(core: OperatorExpr, R, half: int = 0) -> OperatorExpr:
    return func_of_even(core, R, half)


def prime_core() -> OperatorExpr:
    return m() * m() + dot(pivec(), pivec())


# ---------------------------------------------------------------- Hamiltonians

def dirac_pauli(anomalous: bool = True) -> OperatorExpr:
    """alpha.pi + beta m + e Phi + mu'(-Pi.H + i gamma.E)."""
    h = dot(alpha(), pivec()) + beta() * m() + e() * Phi()
    if anomalous:
        h = h + mu1() * (-dot(Pi(), Bfield()) + I * dot(gamma(), Efield()))
    return h


def pnc() -> OperatorExpr:
    """-(G/sqrt2)(C1 gamma5 + C2 alpha.sigma') n."""
    return -(inv_sqrt2() * G() * (C1() * gamma5() + C2() * dot(alpha(), sigmam())) * density())


def electroweak(anomalous: bool = True) -> OperatorExpr:
    return dirac_pauli(anomalous) + pnc()


def free_dirac() -> OperatorExpr:
    return dot(alpha(), pivec()) + beta() * m()
