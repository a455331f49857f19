"""Grading caps used to truncate operator series."""
from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class TruncationPolicy:
    """Caps on the grading of kept terms.  ``None`` means unbounded.

    ``max_field_degree`` counts field-jet occurrences, ``max_deriv_order`` the total
    derivative order carried by the jets of a term, ``max_weak_degree`` the power of
    G.  ``inv_mass_order`` switches on the nonrelativistic grading
    ``(power of 1/m) + field degree <= inv_mass_order``.
    """

    max_field_degree: Optional[int] = None
    max_deriv_order: Optional[int] = None
    max_weak_degree: Optional[int] = None
    inv_mass_order: Optional[int] = None
    zero_consts: tuple = ()

    @property
    def key(self):
        return (self.max_field_degree, self.max_deriv_order, self.max_weak_degree, self.inv_mass_order,
                self.zero_consts)

    @property
    def bounded(self) -> bool:
        return self.max_field_degree is not None or self.max_deriv_order is not None or self.inv_mass_order is not None

    def admits(self, field: int, deriv: int, weak: int, m_exp: int) -> bool:
        if self.max_field_degree is not None and field > self.max_field_degree:
            return False
        if self.max_deriv_order is not None and deriv > self.max_deriv_order:
            return False
        if self.max_weak_degree is not None and weak > self.max_weak_degree:
            return False
        if self.inv_mass_order is not None and field - m_exp > self.inv_mass_order:
            return False
        return True

    def bump(self, field: int = 0, deriv: int = 0, inv_mass: int = 0) -> "TruncationPolicy":
        """Policy with the field/derivative caps raised (None stays None)."""
        f = None if self.max_field_degree is None else self.max_field_degree + field
        d = None if self.max_deriv_order is None else self.max_deriv_order + deriv
        nr = self.inv_mass_order
        if nr is not None:
            nr += inv_mass
        return TruncationPolicy(f, d, self.max_weak_degree, nr, self.zero_consts)

    def with_zero(self, *names: str) -> "TruncationPolicy":
        """Same caps with the named constants set to zero."""
        z = tuple(sorted(set(self.zero_consts) | set(names)))
        return TruncationPolicy(self.max_field_degree, self.max_deriv_order, self.max_weak_degree,
                                self.inv_mass_order, z)

    @classmethod
    def parse(cls, text: str) -> "TruncationPolicy":
        """Parse ``field:F,deriv:D,weak:W`` or ``nonrel:K``."""
        kw = {}
        names = {"field": "max_field_degree", "deriv": "max_deriv_order",
                 "weak": "max_weak_degree", "nonrel": "inv_mass_order"}
        for part in filter(None, (p.strip() for p in text.split(","))):
            k, _, v = part.partition(":")
            if k not in names or not v.strip().isdigit():
                raise ValueError(f"bad policy item {part!r}")
            kw[names[k]] = int(v)
        return cls(**kw)


UNBOUNDED = TruncationPolicy()
_current: contextvars.ContextVar[Optional[TruncationPolicy]] = contextvars.ContextVar("fw_policy", default=None)


def current() -> Optional[TruncationPolicy]:
    return _current.get()


@contextmanager
def policy_scope(policy: Optional[TruncationPolicy]):
    token = _current.set(policy)
    try:
        yield policy
    finally:
        _current.reset(token)
