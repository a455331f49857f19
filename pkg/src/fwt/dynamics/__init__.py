"""Equations of motion, semiclassical reduction and trajectory integration."""
from .eom import derive_momentum_eom, derive_spin_eom  # noqa: F401
from .semiclassical import eq37_sym, eq38_sym, semiclassical_reduce  # noqa: F401
