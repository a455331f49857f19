"""Foldy-Wouthuysen transformation engine for Dirac Hamiltonians in external fields."""
from .errors import *  # noqa: F401,F403
from .expr import (OperatorExpr, adjoint, anticommutator, canonicalize, commutator, multiply,  # noqa: F401
                   truncate)
from .policy import TruncationPolicy, policy_scope  # noqa: F401

__version__ = "0.1.0"
