"""Field configurations and semiclassical states for trajectory integration."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# layout of the flat parameter vector shared by the Python and Cython kernels
P_M, P_E, P_MU1, P_G, P_C1, P_C2 = range(6)
P_E0 = 6            # 3
P_B0 = 9            # 3
P_DE = 12           # 9, row-major dE[i][j] = d_j E_i
P_DB = 21           # 9, row-major dB[i][j] = d_j B_i
P_NAMP = 30
P_NC = 31           # 3
P_NW = 34
P_XIP = 35          # 3
N_PARAMS = 38


@dataclass
class FieldConfig:
    """Uniform fields with optional constant gradients and a Gaussian matter density.

    ``dE[i][j] = d E_i / d x_j`` (likewise ``dB``).  The density is
    ``n(r) = n_amp * exp(-|r - n_center|^2 / (2 n_width^2))``.
    """

    E0: tuple = (0.0, 0.0, 0.0)
    B0: tuple = (0.0, 0.0, 0.0)
    dE: tuple | None = None
    dB: tuple | None = None
    n_amp: float = 0.0
    n_center: tuple = (0.0, 0.0, 0.0)
    n_width: float = 1.0
    xi_matter: tuple = (0.0, 0.0, 0.0)
    m: float = 1.0
    e: float = 1.0
    mu1: float = 0.0
    G: float = 0.0
    C1: float = 0.0
    C2: float = 0.0

    def validate(self):
        if self.n_width <= 0:
            raise ValueError("Gaussian width must be positive")
        if np.linalg.norm(self.xi_matter) > 1 + 1e-12:
            raise ValueError("|xi'| must not exceed 1")
        if self.m <= 0:
            raise ValueError("mass must be positive")
        if self.dB is not None and abs(np.trace(np.asarray(self.dB, float))) > 1e-12:
            raise ValueError("magnetic-field gradient violates div B = 0")

    def params(self) -> np.ndarray:
        self.validate()
        p = np.zeros(N_PARAMS)
        p[P_M], p[P_E], p[P_MU1], p[P_G], p[P_C1], p[P_C2] = self.m, self.e, self.mu1, self.G, self.C1, self.C2
        p[P_E0:P_E0 + 3] = self.E0
        p[P_B0:P_B0 + 3] = self.B0
        if self.dE is not None:
            p[P_DE:P_DE + 9] = np.asarray(self.dE, float).reshape(9)
        if self.dB is not None:
            p[P_DB:P_DB + 9] = np.asarray(self.dB, float).reshape(9)
        p[P_NAMP] = self.n_amp
        p[P_NC:P_NC + 3] = self.n_center
        p[P_NW] = self.n_width
        p[P_XIP:P_XIP + 3] = self.xi_matter
        return p

    def potential(self, r) -> float:
        """``Phi`` with ``E = -grad Phi`` (uses the symmetric part of ``dE``)."""
        r = np.asarray(r, float)
        phi = -float(np.dot(self.E0, r))
        if self.dE is not None:
            phi -= 0.5 * float(r @ np.asarray(self.dE, float).reshape(3, 3) @ r)
        return phi


@dataclass
class SimState:
    t: float = 0.0
    r: tuple = (0.0, 0.0, 0.0)
    pi: tuple = (0.0, 0.0, 0.0)
    xi: tuple = (0.0, 0.0, 1.0)

    def vector(self) -> np.ndarray:
        return np.array(list(self.r) + list(self.pi) + list(self.xi), float)


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray                    # (steps+1, 9): r, pi, xi
    energy: np.ndarray
    kernel: str = "python"
    meta: dict = field(default_factory=dict)

    @property
    def xi_norm(self) -> np.ndarray:
        return np.linalg.norm(self.y[:, 6:9], axis=1)
