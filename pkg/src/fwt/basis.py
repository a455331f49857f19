"""Dirac (x) matter-Pauli matrix basis.

Every one of the 64 basis elements is a Pauli string ``tau_a (x) sigma_b (x) sigma'_c``
with ``a, b, c`` in ``0..3``.  In the standard (Dirac) representation

    beta    = tau_3 (x) 1          alpha_k = tau_1 (x) sigma_k
    Sigma_k = 1 (x) sigma_k        Pi_k    = tau_3 (x) sigma_k
    gamma_k = i tau_2 (x) sigma_k  gamma5  = -tau_1 (x) 1

so products close on the basis up to a power of ``i``.  An element is encoded
as the integer ``16*a + 4*b + c``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# sigma_a sigma_b = i**_PHASE[a][b] sigma_{_PROD[a][b]}
_PROD = [[a ^ b for b in range(4)] for a in range(4)]
_PHASE = [[0] * 4 for _ in range(4)]
for _a, _b, _c in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
    _PHASE[_a][_b] = 1
    _PHASE[_b][_a] = 3

IDENTITY = 0
N_BASIS = 64


def encode(a: int, b: int, c: int = 0) -> int:
    return 16 * a + 4 * b + c


def decode(idx: int) -> tuple[int, int, int]:
    return idx >> 4, (idx >> 2) & 3, idx & 3


@lru_cache(maxsize=None)
def multiply(i: int, j: int) -> tuple[int, int]:
    """Return ``(k, ipow)`` with ``e_i e_j = i**ipow e_k``."""
    a1, b1, c1 = decode(i)
    a2, b2, c2 = decode(j)
    ph = _PHASE[a1][a2] + _PHASE[b1][b2] + _PHASE[c1][c2]
    return encode(_PROD[a1][a2], _PROD[b1][b2], _PROD[c1][c2]), ph % 4


def is_even(idx: int) -> bool:
    """True if the element commutes with beta (tau part is 1 or tau_3)."""
    return (idx >> 4) in (0, 3)


def matrix(idx: int) -> np.ndarray:
    a, b, c = decode(idx)
    return np.kron(np.kron(PAULI[a], PAULI[b]), PAULI[c])


# named elements: (pauli index, i-power) so that name = i**p * e_idx
def beta() -> tuple[int, int]:
    return encode(3, 0), 0


def gamma5() -> tuple[int, int]:
    return encode(1, 0), 2


def alpha(k: int) -> tuple[int, int]:
    return encode(1, k), 0


def gamma(k: int) -> tuple[int, int]:
    return encode(2, k), 1


def Sigma(k: int) -> tuple[int, int]:
    return encode(0, k), 0


def Pi(k: int) -> tuple[int, int]:
    return encode(3, k), 0


def sigma_matter(k: int) -> tuple[int, int]:
    return encode(0, 0, k), 0


# printing aliases: e_idx = i**p * (product of names)
_DIRAC_NAMES = {
    (0, 0): ((), 0),
    (3, 0): (("beta",), 0),
    (1, 0): (("gamma5",), 2),
    # beta*gamma5 = -i tau_2
    (2, 0): (("beta", "gamma5"), 1),
}
for _k in (1, 2, 3):
    _DIRAC_NAMES[(0, _k)] = ((f"Sigma_{_k}",), 0)
    _DIRAC_NAMES[(3, _k)] = ((f"Pi_{_k}",), 0)
    _DIRAC_NAMES[(1, _k)] = ((f"alpha_{_k}",), 0)
    # gamma_k = i tau_2 sigma_k
    _DIRAC_NAMES[(2, _k)] = ((f"gamma_{_k}",), 3)


def names(idx: int) -> tuple[tuple[str, ...], int]:
    """Named factors and phase ``p`` with ``e_idx = i**p * prod(names)``."""
    a, b, c = decode(idx)
    nm, ph = _DIRAC_NAMES[(a, b)]
    if c:
        nm = nm + (f"sigmam_{c}",)
    return nm, ph
