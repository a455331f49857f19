"""Field jets: a field component together with its derivative orders.

A jet is the tuple ``(field, comp, d1, d2, d3, dt)``.  Jets are real, commute with
everything except kinetic momenta and ``i d/dt``, and are kept reduced modulo the
homogeneous Maxwell equations (div B = 0, curl E = -dB/dt) and the static-matter
condition dn/dt = 0.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

PHI, EFIELD, BFIELD, DENSITY = 0, 1, 2, 3
FIELD_NAMES = {PHI: "Phi", EFIELD: "E", BFIELD: "B", DENSITY: "n"}
FIELD_CODES = {v: k for k, v in FIELD_NAMES.items()}
VECTOR_FIELDS = (EFIELD, BFIELD)

Jet = tuple  # (field, comp, d1, d2, d3, dt)

_LEVI = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1, (2, 1, 3): -1, (3, 2, 1): -1, (1, 3, 2): -1}


def levi(i: int, j: int, k: int) -> int:
    return _LEVI.get((i, j, k), 0)


def make(field: int, comp: int = 0, d=(0, 0, 0), dt: int = 0) -> Jet:
    return (field, comp, d[0], d[1], d[2], dt)


def order(jet: Jet) -> int:
    return jet[2] + jet[3] + jet[4] + jet[5]


def _bump(jet: Jet, axis: int, by: int = 1) -> Jet:
    # axis 1..3 spatial, 0 time
    j = list(jet)
    j[5 if axis == 0 else axis + 1] += by
    return tuple(j)


@lru_cache(maxsize=None)
def reduce(jet: Jet) -> tuple[tuple[Fraction, Jet], ...]:
    """Reduce a jet modulo Maxwell/static-matter relations to a linear combination."""
    field, comp, d1, d2, d3, dt = jet
    if field == DENSITY and dt:
        return ()
    if field == EFIELD:
        d = (d1, d2, d3)
        for i in (3, 2, 1):
            if i > comp and d[i - 1] > 0:
                # d_i E_c = d_c E_i - eps_{i c k} dB_k/dt
                k = 6 - i - comp
                base = list(jet)
                base[i + 1] -= 1
                swapped = _bump((EFIELD, i) + tuple(base[2:]), comp)
                out = dict()
                for c, j in reduce(swapped):
                    out[j] = out.get(j, 0) + c
                s = levi(i, comp, k)
                bk = _bump((BFIELD, k) + tuple(base[2:]), 0)
                for c, j in reduce(bk):
                    out[j] = out.get(j, 0) - s * c
                return tuple((c, j) for j, c in sorted(out.items()) if c)
    if field == BFIELD and comp == 3 and d3 > 0:
        out = dict()
        for a in (1, 2):
            base = (BFIELD, a, d1, d2, d3 - 1, dt)
            for c, j in reduce(_bump(base, a)):
                out[j] = out.get(j, 0) - c
        return tuple((c, j) for j, c in sorted(out.items()) if c)
    return ((Fraction(1), jet),)


def derivative(jet: Jet, axis: int) -> tuple[tuple[Fraction, Jet], ...]:
    """Partial derivative (axis 1..3, or 0 for time) as a reduced combination."""
    return reduce(_bump(jet, axis))


def name(jet: Jet) -> str:
    field, comp, d1, d2, d3, dt = jet
    s = FIELD_NAMES[field] + (f"_{comp}" if comp else "")
    for axis, cnt in ((1, d1), (2, d2), (3, d3)):
        for _ in range(cnt):
            s = f"d{axis}({s})"
    for _ in range(dt):
        s = f"ddt({s})"
    return s
