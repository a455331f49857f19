"""Shared fixtures and hypothesis strategies."""
from fractions import Fraction
from functools import reduce

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fwt import builders as bl
from fwt.expr import I, scalar
from fwt.numkit import PlaneWavePoint, uniform_fields

settings.register_profile("fwt", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fwt")


def _atoms():
    return ([bl.beta(), bl.gamma5(), I, bl.m(), bl.e(), bl.mu1(), bl.G(), bl.Phi(), bl.density()]
            + list(bl.alpha()) + list(bl.Sigma()) + list(bl.Pi()) + list(bl.gamma()) + list(bl.sigmam())
            + list(bl.pivec()) + list(bl.Efield()) + list(bl.Bfield()))


ATOMS = _atoms()

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(lambda q: q != 0)


@st.composite
def terms(draw, max_factors=3):
    fs = draw(st.lists(st.sampled_from(ATOMS), min_size=0, max_size=max_factors))
    c = draw(coeffs)
    return reduce(lambda a, b: a * b, fs, scalar(c))


@st.composite
def exprs(draw, max_terms=3, max_factors=3):
    ts = draw(st.lists(terms(max_factors), min_size=1, max_size=max_terms))
    return reduce(lambda a, b: a + b, ts)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def commuting_point(rng, charge=0.0):
    """Plane-wave point with uniform fields; with ``charge=0`` the realization is an
    algebra homomorphism (all momenta and jets commute numerically)."""
    consts = {"m": float(rng.uniform(0.5, 2)), "e": charge, "mu1": float(rng.uniform(-1, 1)),
              "G": float(rng.uniform(-1, 1)), "C1": float(rng.uniform(-1, 1)), "C2": float(rng.uniform(-1, 1))}
    f = uniform_fields(E=tuple(rng.uniform(-1, 1, 3)), B=tuple(rng.uniform(-1, 1, 3)),
                       Phi=float(rng.uniform(-1, 1)), n=float(rng.uniform(0, 1)))
    return PlaneWavePoint(tuple(rng.uniform(-1, 1, 3)), f, consts)

