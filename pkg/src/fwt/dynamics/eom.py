"""Operator equations of motion in the FW representation (Sec. VII)."""
from __future__ import annotations

from typing import Optional

from .. import basis as B
from ..builders import Efield, Phi, Pi, deriv, e, pivec
from ..errors import OddTermPresent
from ..expr import BA, I, OperatorExpr, commutator, is_even, multiply
from ..policy import TruncationPolicy, current


def _check_even(H: OperatorExpr):
    if not is_even(H):
        raise OddTermPresent("FW Hamiltonian still contains odd terms")


def derive_momentum_eom(H: OperatorExpr, policy: Optional[TruncationPolicy] = None) -> tuple:
    """``dpi/dt = i[H, pi] - e dA/dt = i[H, pi] + e (E + grad Phi)`` per component."""
    _check_even(H)
    pol = policy if policy is not None else current()
    p, E = pivec(), Efield()
    return tuple(multiply(I, commutator(H, p[k], pol), pol) + e() * (E[k] + deriv(Phi(), k + 1))
                 for k in range(3))


def derive_spin_eom(H: OperatorExpr, policy: Optional[TruncationPolicy] = None) -> tuple:
    """``dPi/dt = i[H, Pi]`` per component."""
    _check_even(H)
    pol = policy if policy is not None else current()
    P = Pi()
    return tuple(multiply(I, commutator(H, P[k], pol), pol) for k in range(3))
