"""Pure-Python RK4 kernel for Eqs. (37)-(38); mirrors ``_rk4.pyx`` line by line.

Fields are linear in ``r`` (constant gradients), so second derivatives of E and
B vanish, as do ``Delta E``, ``(pi.grad)grad(pi.E)`` and ``grad(j.pi)``.
"""
from __future__ import annotations

import math


def rhs(y, p, out):
    m, e, mu1, G, C1, C2 = p[0], p[1], p[2], p[3], p[4], p[5]
    r0, r1, r2 = y[0], y[1], y[2]
    p0, p1, p2 = y[3], y[4], y[5]
    x0, x1, x2 = y[6], y[7], y[8]
    # fields at r
    E0 = p[6] + p[12] * r0 + p[13] * r1 + p[14] * r2
    E1 = p[7] + p[15] * r0 + p[16] * r1 + p[17] * r2
    E2 = p[8] + p[18] * r0 + p[19] * r1 + p[20] * r2
    B0 = p[9] + p[21] * r0 + p[22] * r1 + p[23] * r2
    B1 = p[10] + p[24] * r0 + p[25] * r1 + p[26] * r2
    B2 = p[11] + p[27] * r0 + p[28] * r1 + p[29] * r2
    # Gaussian density and its gradient
    amp, w = p[30], p[34]
    d0, d1, d2 = r0 - p[31], r1 - p[32], r2 - p[33]
    n = amp * math.exp(-(d0 * d0 + d1 * d1 + d2 * d2) / (2.0 * w * w)) if amp != 0.0 else 0.0
    gn0, gn1, gn2 = -n * d0 / (w * w), -n * d1 / (w * w), -n * d2 / (w * w)
    q0, q1, q2 = p[35], p[36], p[37]

    ep = math.sqrt(m * m + p0 * p0 + p1 * p1 + p2 * p2)
    mu0m = 0.5 * e
    A = (mu0m / (ep + m) + mu1) / ep
    Bc = mu0m / ep + mu1
    F1 = 1.0 / (ep * (ep + m))

    # ---- Eq. (37)
    # grad_k (xi . (pi x E)) = xi . (pi x d_k E)
    gso = [0.0, 0.0, 0.0]
    gxB = [0.0, 0.0, 0.0]
    gBp = [0.0, 0.0, 0.0]
    for k in range(3):
        dE0, dE1, dE2 = p[12 + k], p[15 + k], p[18 + k]
        dB0, dB1, dB2 = p[21 + k], p[24 + k], p[27 + k]
        c0 = p1 * dE2 - p2 * dE1
        c1 = p2 * dE0 - p0 * dE2
        c2 = p0 * dE1 - p1 * dE0
        gso[k] = x0 * c0 + x1 * c1 + x2 * c2
        gxB[k] = x0 * dB0 + x1 * dB1 + x2 * dB2
        gBp[k] = p0 * dB0 + p1 * dB1 + p2 * dB2
    xp = x0 * p0 + x1 * p1 + x2 * p2
    l0 = p1 * B2 - p2 * B1
    l1 = p2 * B0 - p0 * B2
    l2 = p0 * B1 - p1 * B0
    out[3] = e * E0 + e / ep * l0 - A * gso[0] + Bc * gxB[0] - mu1 * F1 * xp * gBp[0]
    out[4] = e * E1 + e / ep * l1 - A * gso[1] + Bc * gxB[1] - mu1 * F1 * xp * gBp[1]
    out[5] = e * E2 + e / ep * l2 - A * gso[2] + Bc * gxB[2] - mu1 * F1 * xp * gBp[2]

    # ---- Eq. (38): d xi/dt = xi x Omega
    # [xi x (E x pi)], [xi x H], (H.pi)[xi x pi], 2 C1 n [xi x pi], C2 [xi x (xi' x grad n)]
    Exp0 = E1 * p2 - E2 * p1
    Exp1 = E2 * p0 - E0 * p2
    Exp2 = E0 * p1 - E1 * p0
    Bp = B0 * p0 + B1 * p1 + B2 * p2
    s2 = math.sqrt(2.0)
    cg = G / (s2 * ep)
    qg0 = q1 * gn2 - q2 * gn1
    qg1 = q2 * gn0 - q0 * gn2
    qg2 = q0 * gn1 - q1 * gn0
    W0 = 2 * A * Exp0 + 2 * Bc * B0 - 2 * mu1 * F1 * Bp * p0 - cg * (2 * C1 * n * p0 + C2 * qg0)
    W1 = 2 * A * Exp1 + 2 * Bc * B1 - 2 * mu1 * F1 * Bp * p1 - cg * (2 * C1 * n * p1 + C2 * qg1)
    W2 = 2 * A * Exp2 + 2 * Bc * B2 - 2 * mu1 * F1 * Bp * p2 - cg * (2 * C1 * n * p2 + C2 * qg2)
    out[6] = x1 * W2 - x2 * W1
    out[7] = x2 * W0 - x0 * W2
    out[8] = x0 * W1 - x1 * W0

    # dr/dt = pi / eps'
    out[0] = p0 / ep
    out[1] = p1 / ep
    out[2] = p2 / ep


def integrate(y0, params, dt, nsteps, out, tol=1e-6):
    """Fixed-step RK4; writes rows into ``out`` (shape (nsteps+1, 9)).

    Returns -1 on success or the index of the step where ``| |xi| - |xi0| |`` first
    exceeded ``tol``.
    """
    n = 9
    y = [float(v) for v in y0]
    p = [float(v) for v in params]
    k1 = [0.0] * n
    k2 = [0.0] * n
    k3 = [0.0] * n
    k4 = [0.0] * n
    tmp = [0.0] * n
    norm0 = math.sqrt(y[6] ** 2 + y[7] ** 2 + y[8] ** 2)
    for i in range(n):
        out[0, i] = y[i]
    h = dt
    for s in range(1, nsteps + 1):
        rhs(y, p, k1)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * h * k1[i]
        rhs(tmp, p, k2)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * h * k2[i]
        rhs(tmp, p, k3)
        for i in range(n):
            tmp[i] = y[i] + h * k3[i]
        rhs(tmp, p, k4)
        for i in range(n):
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            out[s, i] = y[i]
        if abs(math.sqrt(y[6] ** 2 + y[7] ** 2 + y[8] ** 2) - norm0) > tol:
            return s
    return -1
