"""Trajectory integration of the semiclassical equations (37)-(38).

The compiled kernel (``_rk4``) is used when it has been built; otherwise the
pure-Python kernel with identical arithmetic is used.  ``KERNEL`` names the active one.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from ..errors import StepRejected
from .fields import FieldConfig, SimState, Trajectory

try:  # pragma: no cover - depends on the build
    from ._rk4 import integrate as _integrate_c
    KERNEL = "cython"
except ImportError:  # pragma: no cover
    _integrate_c = None
    KERNEL = "python"

from ._rk4_py import integrate as _integrate_py

DRIFT_TOL = 1e-6


def integrate(cfg: FieldConfig, s0: SimState, t_end: float, dt: float, kernel: str | None = None,
              tol: float = DRIFT_TOL) -> Trajectory:
    """Fixed-step RK4 integration without spin renormalization.

    Raises ``StepRejected`` when ``|xi|`` drifts by more than ``tol``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_end < s0.t:
        raise ValueError("t_end before initial time")
    nsteps = int(round((t_end - s0.t) / dt))
    params = np.ascontiguousarray(cfg.params())
    y0 = np.ascontiguousarray(s0.vector())
    out = np.zeros((nsteps + 1, 9))
    use = kernel or KERNEL
    if use == "cython":
        if _integrate_c is None:
            raise RuntimeError("compiled kernel not built")
        status = _integrate_c(y0, params, float(dt), nsteps, out, float(tol))
    else:
        status = _integrate_py(y0, params, float(dt), nsteps, out, float(tol))
    if status >= 0:
        raise StepRejected(f"|xi| drift exceeded {tol:g} at step {status} (t = {s0.t + status * dt:g}); reduce dt")
    t = s0.t + dt * np.arange(nsteps + 1)
    energy = np.array([math.sqrt(cfg.m ** 2 + float(np.dot(y[3:6], y[3:6]))) + cfg.e * cfg.potential(y[0:3])
                       for y in out])
    return Trajectory(t=t, y=out, energy=energy, kernel=use)


def precession_frequency(traj: Trajectory, axis) -> float:
    """Mean angular velocity of the spin projection orthogonal to ``axis``
    (least-squares slope of the unwrapped angle)."""
    a = np.asarray(axis, float)
    a = a / np.linalg.norm(a)
    ref = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = ref - a * np.dot(ref, a)
    u /= np.linalg.norm(u)
    v = np.cross(a, u)
    xi = traj.y[:, 6:9]
    ang = np.unwrap(np.arctan2(xi @ v, xi @ u))
    slope = np.polyfit(traj.t - traj.t[0], ang, 1)[0]
    return -float(slope)  # d xi/dt = xi x Omega rotates clockwise about Omega


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x", "y", "z", "pi_x", "pi_y", "pi_z", "xi_x", "xi_y", "xi_z", "xi_norm", "energy"])
    norms = traj.xi_norm
    for i in range(len(traj.t)):
        row = [traj.t[i], *traj.y[i], norms[i], traj.energy[i]]
        w.writerow([f"{v:.15e}" for v in row])
    return buf.getvalue()


def summary(traj: Trajectory, cfg: FieldConfig) -> dict:
    B = np.asarray(cfg.B0, float)
    out = {
        "kernel": traj.kernel,
        "steps": len(traj.t) - 1,
        "t_end": float(traj.t[-1]),
        "xi_norm_drift": float(np.max(np.abs(traj.xi_norm - traj.xi_norm[0]))),
        "energy_drift": float(np.max(np.abs(traj.energy - traj.energy[0]))),
    }
    if np.linalg.norm(B) > 0:
        out["precession_frequency"] = precession_frequency(traj, B)
        out["expected_rest_frequency"] = cfg.e * float(np.linalg.norm(B)) / cfg.m + 2 * cfg.mu1 * float(np.linalg.norm(B))
    return out


def summary_json(traj: Trajectory, cfg: FieldConfig) -> str:
    return json.dumps(summary(traj, cfg), indent=2, sort_keys=True)
