# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 kernel for Eqs. (37)-(38); same arithmetic as ``_rk4_py.py``."""
from libc.math cimport sqrt, exp, fabs


cdef void rhs(const double* y, const double* p, double* out) noexcept nogil:
    cdef double m = p[0], e = p[1], mu1 = p[2], G = p[3], C1 = p[4], C2 = p[5]
    cdef double r0 = y[0], r1 = y[1], r2 = y[2]
    cdef double p0 = y[3], p1 = y[4], p2 = y[5]
    cdef double x0 = y[6], x1 = y[7], x2 = y[8]
    cdef double E0 = p[6] + p[12] * r0 + p[13] * r1 + p[14] * r2
    cdef double E1 = p[7] + p[15] * r0 + p[16] * r1 + p[17] * r2
    cdef double E2 = p[8] + p[18] * r0 + p[19] * r1 + p[20] * r2
    cdef double B0 = p[9] + p[21] * r0 + p[22] * r1 + p[23] * r2
    cdef double B1 = p[10] + p[24] * r0 + p[25] * r1 + p[26] * r2
    cdef double B2 = p[11] + p[27] * r0 + p[28] * r1 + p[29] * r2
    cdef double amp = p[30], w = p[34]
    cdef double d0 = r0 - p[31], d1 = r1 - p[32], d2 = r2 - p[33]
    cdef double n = 0.0
    if amp != 0.0:
        n = amp * exp(-(d0 * d0 + d1 * d1 + d2 * d2) / (2.0 * w * w))
    cdef double gn0 = -n * d0 / (w * w), gn1 = -n * d1 / (w * w), gn2 = -n * d2 / (w * w)
    cdef double q0 = p[35], q1 = p[36], q2 = p[37]

    cdef double ep = sqrt(m * m + p0 * p0 + p1 * p1 + p2 * p2)
    cdef double mu0m = 0.5 * e
    cdef double A = (mu0m / (ep + m) + mu1) / ep
    cdef double Bc = mu0m / ep + mu1
    cdef double F1 = 1.0 / (ep * (ep + m))

    cdef double gso[3]
    cdef double gxB[3]
    cdef double gBp[3]
    cdef int k
    cdef double dE0, dE1, dE2, dB0, dB1, dB2, c0, c1, c2
    for k in range(3):
        dE0 = p[12 + k]; dE1 = p[15 + k]; dE2 = p[18 + k]
        dB0 = p[21 + k]; dB1 = p[24 + k]; dB2 = p[27 + k]
        c0 = p1 * dE2 - p2 * dE1
        c1 = p2 * dE0 - p0 * dE2
        c2 = p0 * dE1 - p1 * dE0
        gso[k] = x0 * c0 + x1 * c1 + x2 * c2
        gxB[k] = x0 * dB0 + x1 * dB1 + x2 * dB2
        gBp[k] = p0 * dB0 + p1 * dB1 + p2 * dB2
    cdef double xp = x0 * p0 + x1 * p1 + x2 * p2
    cdef double l0 = p1 * B2 - p2 * B1
    cdef double l1 = p2 * B0 - p0 * B2
    cdef double l2 = p0 * B1 - p1 * B0
    out[3] = e * E0 + e / ep * l0 - A * gso[0] + Bc * gxB[0] - mu1 * F1 * xp * gBp[0]
    out[4] = e * E1 + e / ep * l1 - A * gso[1] + Bc * gxB[1] - mu1 * F1 * xp * gBp[1]
    out[5] = e * E2 + e / ep * l2 - A * gso[2] + Bc * gxB[2] - mu1 * F1 * xp * gBp[2]

    cdef double Exp0 = E1 * p2 - E2 * p1
    cdef double Exp1 = E2 * p0 - E0 * p2
    cdef double Exp2 = E0 * p1 - E1 * p0
    cdef double Bp = B0 * p0 + B1 * p1 + B2 * p2
    cdef double cg = G / (sqrt(2.0) * ep)
    cdef double qg0 = q1 * gn2 - q2 * gn1
    cdef double qg1 = q2 * gn0 - q0 * gn2
    cdef double qg2 = q0 * gn1 - q1 * gn0
    cdef double W0 = 2 * A * Exp0 + 2 * Bc * B0 - 2 * mu1 * F1 * Bp * p0 - cg * (2 * C1 * n * p0 + C2 * qg0)
    cdef double W1 = 2 * A * Exp1 + 2 * Bc * B1 - 2 * mu1 * F1 * Bp * p1 - cg * (2 * C1 * n * p1 + C2 * qg1)
    cdef double W2 = 2 * A * Exp2 + 2 * Bc * B2 - 2 * mu1 * F1 * Bp * p2 - cg * (2 * C1 * n * p2 + C2 * qg2)
    out[6] = x1 * W2 - x2 * W1
    out[7] = x2 * W0 - x0 * W2
    out[8] = x0 * W1 - x1 * W0
    out[0] = p0 / ep
    out[1] = p1 / ep
    out[2] = p2 / ep


def integrate(double[::1] y0, double[::1] params, double dt, long nsteps, double[:, ::1] out, double tol=1e-6):
    """Fixed-step RK4; see ``_rk4_py.integrate``."""
    cdef double y[9]
    cdef double k1[9]
    cdef double k2[9]
    cdef double k3[9]
    cdef double k4[9]
    cdef double tmp[9]
    cdef int i
    cdef long s
    cdef double h = dt, norm0, nrm
    cdef long status = -1
    cdef const double* p = &params[0]
    for i in range(9):
        y[i] = y0[i]
        out[0, i] = y[i]
    norm0 = sqrt(y[6] * y[6] + y[7] * y[7] + y[8] * y[8])
    with nogil:
        for s in range(1, nsteps + 1):
            rhs(y, p, k1)
            for i in range(9):
                tmp[i] = y[i] + 0.5 * h * k1[i]
            rhs(tmp, p, k2)
            for i in range(9):
                tmp[i] = y[i] + 0.5 * h * k2[i]
            rhs(tmp, p, k3)
            for i in range(9):
                tmp[i] = y[i] + h * k3[i]
            rhs(tmp, p, k4)
            for i in range(9):
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                out[s, i] = y[i]
            nrm = sqrt(y[6] * y[6] + y[7] * y[7] + y[8] * y[8])
            if fabs(nrm - norm0) > tol:
                status = s
                break
    return status
