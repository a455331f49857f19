"""Finite-dimensional realizations of operator expressions and brute-force oracles.

Two realizations are provided:

* ``PlaneWavePoint`` - the momenta are numbers ``p_k`` and every field jet a bound
  number (8x8 matrices).  This is an algebra homomorphism whenever the commutators
  it ignores vanish: uniform fields (all derivative jets zero) with ``e B = 0``, or
  expressions free of kinetic momenta.
* ``OscillatorBasis`` - uniform magnetic field ``B e_z``: ``pi_1 = c(a + a^dag)``,
  ``pi_2 = i c s (a^dag - a)`` with ``c^2 = |eB|/2`` and ``s = sign(eB)``, so that
  ``[pi_1, pi_2] = i e B`` except on the top oscillator level; ``pi_3 = p_z``
  (8N x 8N matrices, Dirac (x) matter (x) oscillator).

Functions of even operators are evaluated as principal matrix functions through the
eigen-decomposition of the realized core.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
import sympy as sp

from . import basis as B
from . import jets as J
from .errors import GapClosed, NonPositiveCore, UnboundJet
from .expr import BA, CO, CONSTS, FU, IM, JE, MS, NT, PI, X, OperatorExpr, core_expr

DIRAC_DIM = 8


# ---------------------------------------------------------------- realization targets

def _jet_key(j):
    if isinstance(j, str):
        from .dsl import parse_expr
        x = parse_expr(j)
        if len(x) != 1:
            raise ValueError(f"{j!r} is not a single field jet")
        (k, v), = x.items()
        if v != 1 or len(k[JE]) != 1 or k[PI] or k[BA] or any(k[CO]):
            raise ValueError(f"{j!r} is not a single field jet")
        return k[JE][0]
    return tuple(j)


def uniform_fields(E=(0.0, 0.0, 0.0), B=(0.0, 0.0, 0.0), Phi: float = 0.0, n: float = 0.0) -> dict:
    """Jet bindings for uniform fields: values for the fields, zero first derivatives
    (higher jets default to zero)."""
    out = {J.make(J.PHI): Phi, J.make(J.DENSITY): n}
    for k in (1, 2, 3):
        out[J.make(J.EFIELD, k)] = E[k - 1]
        out[J.make(J.BFIELD, k)] = B[k - 1]
    for f, comps in ((J.PHI, (0,)), (J.DENSITY, (0,)), (J.EFIELD, (1, 2, 3)), (J.BFIELD, (1, 2, 3))):
        for c in comps:
            for ax in range(4):
                for _, dj in J.derivative(J.make(f, c), ax):
                    out.setdefault(dj, 0.0)
    return out


DEFAULT_CONSTS = {"m": 1.0, "e": 1.0, "mu1": 0.0, "G": 0.0, "C1": 0.0, "C2": 0.0}


@dataclass
class PlaneWavePoint:
    """Momentum eigenvalue ``p`` with numeric bindings for field jets and constants.

    A jet of derivative order >= 2 defaults to zero; lower jets must be bound."""

    p: tuple = (0.0, 0.0, 0.0)
    fields: dict = field(default_factory=uniform_fields)
    consts: dict = field(default_factory=lambda: dict(DEFAULT_CONSTS))

    def __post_init__(self):
        self.fields = {_jet_key(k): float(v) for k, v in self.fields.items()}

    @property
    def n_osc(self) -> int:
        return 1

    def pi_matrix(self, k: int) -> np.ndarray:
        return np.array([[complex(self.p[k - 1])]])


@dataclass
class OscillatorBasis:
    """Landau-level basis for a uniform field ``B e_z`` truncated at ``N`` levels."""

    N: int = 200
    B: float = 0.01
    p_z: float = 0.0
    consts: dict = field(default_factory=lambda: dict(DEFAULT_CONSTS))
    fields: dict = field(default_factory=dict)

    def __post_init__(self):
        f = uniform_fields(B=(0.0, 0.0, self.B))
        f.update({_jet_key(k): float(v) for k, v in self.fields.items()})
        self.fields = f
        eB = self.consts.get("e", 1.0) * self.B
        self._c = math.sqrt(abs(eB) / 2)
        self._s = 1.0 if eB >= 0 else -1.0

    @property
    def n_osc(self) -> int:
        return self.N

    def ladder(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.N, dtype=float)), 1).astype(complex)

    def pi_matrix(self, k: int) -> np.ndarray:
        a = self.ladder()
        ad = a.conj().T
        if k == 1:
            return self._c * (a + ad)
        if k == 2:
            return 1j * self._c * self._s * (ad - a)
        return self.p_z * np.eye(self.N, dtype=complex)

    def interior(self, edge: int = 3) -> np.ndarray:
        """Indices of the realization whose oscillator level is below ``N - edge``."""
        lv = np.tile(np.arange(self.N), DIRAC_DIM)
        return np.nonzero(lv < self.N - edge)[0]


@dataclass
class MatrixRealization:
    matrix: np.ndarray
    at: object = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


# ---------------------------------------------------------------- realize

def _const_value(idx: int, power: int, consts: dict) -> float:
    name = CONSTS[idx]
    if name == "pinum":
        v = math.pi
    elif name == "s2":
        v = math.sqrt(2.0)
    else:
        if name not in consts:
            raise UnboundJet(f"constant {name!r} is not bound")
        v = consts[name]
    return v ** power


def _jet_value(j, fields: dict) -> float:
    if j in fields:
        return fields[j]
    if J.order(j) >= 2:
        return 0.0
    raise UnboundJet(f"field jet {J.name(j)} is not bound")


@lru_cache(maxsize=None)
def _lambdified(R, h):
    f = sp.lambdify((X, MS), R, "numpy")
    if h:
        def fn(x, m):
            return f(x, m) / np.sqrt(2 * x * (x + m))
        return fn
    return f


def _scalar_factor(k, v, at) -> complex:
    c = complex(float(v))
    if k[IM]:
        c *= 1j
    for idx, pw in enumerate(k[CO]):
        if pw:
            c *= _const_value(idx, pw, at.consts)
    for j in k[JE]:
        c *= _jet_value(j, at.fields)
    return c


def _function_matrix(F, at, tol=1e-10) -> np.ndarray:
    cid, R, h = F
    A = realize(core_expr(cid), at).matrix
    m = at.consts["m"]
    fn = _lambdified(R, h)
    herm = np.allclose(A, A.conj().T, atol=1e-12 * max(1.0, np.abs(A).max()))
    if herm:
        w, V = np.linalg.eigh((A + A.conj().T) / 2)
        scale = max(1.0, np.abs(w).max())
        if w.min() < -tol * scale:
            raise NonPositiveCore(f"core has negative eigenvalue {w.min():.3e}")
        x = np.sqrt(np.clip(w, 0.0, None))
        fx = np.asarray(fn(x, m), dtype=complex) * np.ones_like(x)
        return (V * fx) @ V.conj().T
    w, V = np.linalg.eig(A)
    if np.any(w.real < -tol) or np.any(np.abs(w.imag) > tol * max(1.0, np.abs(w).max())):
        raise NonPositiveCore("core is not positive definite")
    x = np.sqrt(w)
    fx = np.asarray(fn(x, m), dtype=complex) * np.ones_like(x)
    return (V * fx) @ np.linalg.inv(V)


def realize(x: OperatorExpr, at) -> MatrixRealization:
    """Matrix of ``x`` at a plane-wave point or in an oscillator basis."""
    n = at.n_osc
    dim = DIRAC_DIM * n
    pis = {k: at.pi_matrix(k) for k in (1, 2, 3)}
    groups: dict = {}
    for k, v in x.items():
        if k[NT]:
            raise ValueError("the i d/dt atom has no matrix realization")
        c = _scalar_factor(k, v, at)
        if c == 0:
            continue
        if n == 1:
            P = c
            for p in k[PI]:
                P = P * pis[p][0, 0]
        else:
            P = c * np.eye(n, dtype=complex)
            for p in k[PI]:
                P = P @ pis[p]
        g = groups.setdefault(k[FU], {})
        g[k[BA]] = g.get(k[BA], 0) + P
    out = np.zeros((dim, dim), dtype=complex)
    for F, by_basis in groups.items():
        M = np.zeros((dim, dim), dtype=complex)
        for idx, P in by_basis.items():
            M += np.kron(B.matrix(idx), P if n > 1 else np.array([[P]]))
        if F is not None:
            M = M @ _function_matrix(F, at)
        out += M
    return MatrixRealization(out, at)


def basis_matrix(name: str) -> np.ndarray:
    """8x8 matrix of a named element (``beta``, ``alpha_1`` ...)."""
    from .dsl import parse_expr
    return realize(parse_expr(name), PlaneWavePoint()).matrix


# ---------------------------------------------------------------- checks

def _mat(M):
    return M.matrix if isinstance(M, MatrixRealization) else np.asarray(M)


def check_block_diagonal(M, tol: float = 1e-10, idx: Optional[np.ndarray] = None):
    """Frobenius norm of the two off-diagonal Dirac blocks; ``idx`` restricts rows and
    columns (e.g. to the oscillator interior)."""
    A = _mat(M)
    h = A.shape[0] // 2
    upper = np.zeros(A.shape[0], dtype=bool)
    upper[:h] = True
    if idx is not None:
        A = A[np.ix_(idx, idx)]
        upper = upper[idx]
    off = A[np.ix_(upper, ~upper)]
    off2 = A[np.ix_(~upper, upper)]
    res = float(math.sqrt(np.linalg.norm(off) ** 2 + np.linalg.norm(off2) ** 2))
    return res < tol, res


def unitarity_residual(U) -> float:
    A = _mat(U)
    return float(np.linalg.norm(A @ A.conj().T - np.eye(A.shape[0])))


def hermiticity_residual(M) -> float:
    A = _mat(M)
    return float(np.linalg.norm(A - A.conj().T))


def spectrum_compare(H1, H2, k: Optional[int] = None, tol: float = 1e-10) -> dict:
    """Compare the ``k`` lowest-|value| eigenvalues (sorted) of two Hermitian matrices."""
    w1 = np.linalg.eigvalsh(_mat(H1))
    w2 = np.linalg.eigvalsh(_mat(H2))
    if k is None:
        k = min(len(w1), len(w2))
    s1 = np.sort(w1[np.argsort(np.abs(w1), kind="stable")[:k]])
    s2 = np.sort(w2[np.argsort(np.abs(w2), kind="stable")[:k]])
    dev = float(np.max(np.abs(s1 - s2))) if k else 0.0
    return {"k": int(k), "max_deviation": dev, "tol": tol, "passed": dev < tol,
            "eigenvalues_1": s1.tolist(), "eigenvalues_2": s2.tolist()}


def oracle_transform(H, branch: int = 1, gap_tol: float = 1e-12):
    """Numeric FW: unitary ``U`` with ``U H U^dag`` diagonal, positive energies in the
    upper block (``branch=1``, the theta_1 choice) or in the lower block (``branch=2``)."""
    A = _mat(H)
    w, V = np.linalg.eigh(A)
    if np.min(np.abs(w)) < gap_tol:
        raise GapClosed("spectrum touches zero")
    pos, neg = np.nonzero(w > 0)[0], np.nonzero(w < 0)[0]
    if len(pos) != len(neg):
        raise GapClosed("positive and negative spectra have different dimensions")
    order = np.concatenate([pos, neg]) if branch == 1 else np.concatenate([neg, pos])
    U = V[:, order].conj().T
    return MatrixRealization(U), MatrixRealization(np.diag(w[order]).astype(complex))


# ---------------------------------------------------------------- identity oracles (Eqs. 24-25)

def _random_complex(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2 * n)


def _random_spd_sqrt(rng, n):
    Q, _ = np.linalg.qr(_random_complex(rng, n))
    lam = rng.uniform(0.5, 2.0, n)
    return (Q * lam) @ Q.conj().T


def identity_24_deviation(trials: int = 1000, n: int = 8, seed: int = 0) -> float:
    """max |[A^-1, B] - A^-1 [B, A] A^-1| over random invertible ``A``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        A = np.eye(n) + _random_complex(rng, n)
        while np.linalg.cond(A) > 1e3:
            A = np.eye(n) + _random_complex(rng, n)
        Bm = _random_complex(rng, n)
        Ai = np.linalg.inv(A)
        d = (Ai @ Bm - Bm @ Ai) - Ai @ (Bm @ A - A @ Bm) @ Ai
        worst = max(worst, float(np.abs(d).max()))
    return worst


def identity_25_deviation(trials: int = 1000, n: int = 8, seed: int = 1) -> float:
    """max |[A,B] - 1/4{A^-1,[A^2,B]} + 1/4[[A,[A,B]],A^-1]| with ``A`` the principal
    square root of a random positive-definite matrix."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        A = _random_spd_sqrt(rng, n)
        A2 = A @ A
        w, V = np.linalg.eigh(A2)
        A = (V * np.sqrt(w)) @ V.conj().T  # principal root of A^2
        Bm = _random_complex(rng, n)
        Ai = np.linalg.inv(A)

        def c(x, y):
            return x @ y - y @ x

        lhs = c(A, Bm)
        rhs = 0.25 * (Ai @ c(A2, Bm) + c(A2, Bm) @ Ai) - 0.25 * c(c(A, c(A, Bm)), Ai)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


# ---------------------------------------------------------------- exact cases (Sec. V)

CASES = ("free", "a", "b", "c", "d", "e")


def exact_case_hamiltonian(case: str) -> OperatorExpr:
    """Eq. (21) restricted to one of the exact cases a)-e) (or the free particle)."""
    from . import builders as bl
    from .expr import drop_jets, drop_pi, substitute_consts
    if case == "free":
        return bl.free_dirac()
    H = bl.electroweak()
    no_phi_E = lambda j: j[0] in (J.PHI, J.EFIELD)  # noqa: E731
    if case == "a":
        H = drop_jets(H, lambda j: j[0] != J.DENSITY)
        H = substitute_consts(H, e=0)  # A = 0: pi = p
    elif case == "b":
        H = substitute_consts(drop_jets(H, no_phi_E), mu1=0)
    elif case == "c":
        H = substitute_consts(drop_jets(H, lambda j: j[0] in (J.PHI, J.BFIELD)), e=0)
    elif case == "d":
        H = drop_pi(substitute_consts(drop_jets(H, no_phi_E), C1=0, C2=0), 3)
        H = drop_jets(H, lambda j: j[0] == J.BFIELD and j[1] != 3)
    elif case == "e":
        H = drop_pi(substitute_consts(drop_jets(H, lambda j: j[0] == J.PHI), e=0, C1=0, C2=0), 3)
        H = drop_jets(H, lambda j: (j[0] == J.BFIELD and j[1] != 3) or (j[0] == J.EFIELD and j[1] == 3))
    else:
        raise ValueError(f"unknown case {case!r}")
    return H


def _case_points(case: str, n_points: int, rng, N: int):
    """Realization targets consistent with each case's assumptions."""
    out = []
    for _ in range(n_points):
        c = {"m": 1.0, "e": float(rng.uniform(0.2, 1.0)), "mu1": float(rng.uniform(-0.3, 0.3)),
             "G": float(rng.uniform(-0.3, 0.3)), "C1": float(rng.uniform(-1, 1)), "C2": float(rng.uniform(-1, 1))}
        p = tuple(rng.uniform(-1.0, 1.0, 3))
        if case in ("a", "c", "e"):
            c["e"] = 0.0  # uncharged (or A = 0): the momenta commute
        if case == "free":
            out.append(PlaneWavePoint(p, uniform_fields(), c))
        elif case == "a":
            out.append(PlaneWavePoint(p, uniform_fields(n=float(rng.uniform(0, 1))), c))
        elif case == "c":
            out.append(PlaneWavePoint(p, uniform_fields(E=tuple(rng.uniform(-0.5, 0.5, 3)),
                                                        n=float(rng.uniform(0, 1))), c))
        elif case == "e":
            out.append(PlaneWavePoint((p[0], p[1], 0.0),
                                      uniform_fields(E=(*rng.uniform(-0.5, 0.5, 2), 0.0),
                                                     B=(0.0, 0.0, float(rng.uniform(-0.5, 0.5)))), c))
        elif case == "b":
            f = {J.make(J.DENSITY): float(rng.uniform(0, 1))}
            out.append(OscillatorBasis(N, float(rng.uniform(0.05, 0.5)), float(rng.uniform(-0.5, 0.5)), c, f))
        elif case == "d":
            out.append(OscillatorBasis(N, float(rng.uniform(0.05, 0.5)), 0.0, c))
    return out


def verify_exact_case(case: str, n_points: int = 50, seed: int = 0, N: int = 40, tol: float = 1e-10,
                      p=None) -> dict:
    """Conjugate the realized Hamiltonian with the realized Eq. (18) unitary at random
    points; report unitarity, off-block residual and agreement with Eq. (17).

    ``p`` pins a single field-free plane-wave point (cases ``free``, ``a``, ``c``, ``e``)."""
    from .transform import build_exact_unitary, check_exactness, exact_fw, split_even_odd
    rng = np.random.default_rng(seed)
    H = exact_case_hamiltonian(case)
    s = split_even_odd(H)
    exact = check_exactness(s, True)
    U = build_exact_unitary(s)
    Hfw = exact_fw(s, True, override=not exact)
    worst = {"unitarity": 0.0, "off_block": 0.0, "fw_match": 0.0, "spectrum": 0.0}
    if p is not None:
        if case not in ("free", "a", "c", "e"):
            raise ValueError(f"case {case!r} is realized in the oscillator basis; p cannot be pinned")
        points = [PlaneWavePoint(tuple(float(v) for v in p), uniform_fields(), dict(DEFAULT_CONSTS, e=0.0))]
        if case == "e" and points[0].p[2] != 0:
            raise ValueError("case e requires p_z = 0")
    else:
        points = _case_points(case, n_points, rng, N)
    for at in points:
        idx = at.interior() if isinstance(at, OscillatorBasis) else None
        Hm = realize(H, at).matrix
        Um = realize(U, at).matrix
        Fm = realize(Hfw, at).matrix
        rot = Um @ Hm @ Um.conj().T
        if idx is not None:
            uu = (Um @ Um.conj().T)[np.ix_(idx, idx)] - np.eye(len(idx))
            worst["unitarity"] = max(worst["unitarity"], float(np.linalg.norm(uu)))
            rot_i, F_i = rot[np.ix_(idx, idx)], Fm[np.ix_(idx, idx)]
        else:
            worst["unitarity"] = max(worst["unitarity"], unitarity_residual(Um))
            rot_i, F_i = rot, Fm
        worst["off_block"] = max(worst["off_block"], check_block_diagonal(rot_i)[1])
        worst["fw_match"] = max(worst["fw_match"], float(np.abs(rot_i - F_i).max()))
        if idx is None:
            sc = spectrum_compare(Hm, Fm, tol=tol)
        else:
            sc = spectrum_compare((rot_i + rot_i.conj().T) / 2, F_i, tol=tol)
        worst["spectrum"] = max(worst["spectrum"], sc["max_deviation"])
    passed = all(v < tol for v in worst.values())
    return {"case": case, "points": len(points), "symbolic_exactness": exact, "tol": tol,
            "residuals": worst, "passed": passed}


# ---------------------------------------------------------------- Landau levels

def landau_levels(m: float, eB: float, k: int, p_z: float = 0.0) -> np.ndarray:
    """Positive Dirac Landau levels ``sqrt(m^2 + p_z^2 + 2|eB|n)``, n = 0..k-1."""
    return np.sqrt(m ** 2 + p_z ** 2 + 2 * abs(eB) * np.arange(k))


def _distinct_positive(w, k, tol):
    w = np.sort(w[w > 0])
    levels = []
    for x in w:
        if not levels or x - levels[-1] > tol:
            levels.append(x)
        if len(levels) == k:
            break
    return np.array(levels)


def landau_oracle(N: int = 200, B: float = 0.01, m: float = 1.0, e: float = 1.0, p_z: float = 0.0,
                  k: int = 10, tol: float = 1e-8, max_N: int = 1000) -> dict:
    """Diagonalize the Dirac Hamiltonian ``beta m + alpha.pi`` and the FW form
    ``beta sqrt(m^2 + pi^2 - e Sigma.B)`` in a truncated oscillator basis and compare
    their ``k`` lowest positive levels (and the closed form).  ``N`` grows by 50 until
    the ``k``-th level moves by less than ``tol/10``."""
    from . import builders as bl
    from .dsl import parse_expr
    H = bl.free_dirac()
    Hfw = parse_expr("beta*eps")
    consts = dict(DEFAULT_CONSTS, m=m, e=e)

    def levels(n):
        at = OscillatorBasis(n, B, p_z, consts)
        gap = abs(e * B) / 4
        d = _distinct_positive(np.linalg.eigvalsh(realize(H, at).matrix), k, gap)
        f = _distinct_positive(np.linalg.eigvalsh(realize(Hfw, at).matrix), k, gap)
        return d, f

    n = N
    d, f = levels(n)
    shift = math.inf
    while n + 50 <= max_N:
        d2, f2 = levels(n + 50)
        shift = float(np.max(np.abs(d2 - d)))
        if shift < tol / 10:
            break
        n += 50
        d, f = d2, f2
    exact = landau_levels(m, e * B, k, p_z)
    dev = float(np.max(np.abs(d - f)))
    dev_exact = float(np.max(np.abs(d - exact)))
    return {"N": n, "calibration_shift": shift, "k": k, "dirac_levels": d.tolist(), "fw_levels": f.tolist(),
            "closed_form": exact.tolist(), "max_deviation": dev, "max_deviation_closed_form": dev_exact,
            "tol": tol, "passed": dev < tol and dev_exact < tol and shift < tol / 10}


def to_json(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=float)
