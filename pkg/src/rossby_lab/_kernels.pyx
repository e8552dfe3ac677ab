# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: fused per-mode wave propagation and pointwise
pressure nonlinearities. Signatures match ``_kernels_py``."""

from libc.math cimport pow


def modal_propagate(
    double complex[:, ::1] s,
    double complex[:, ::1] w1,
    double complex[:, ::1] w2,
    double[:, ::1] kx,
    double[:, ::1] ky,
    double[:, ::1] sfac,
    double[:, ::1] cfac,
):
    """In-place exp(tau*M(k)) on the spectral triple, via M^3 = -(1+|k|^2)M."""
    cdef Py_ssize_t ni = s.shape[0], nj = s.shape[1], i, j
    cdef double a, b, sf, cf
    cdef double complex u0, u1, u2, m0, m1, m2, n0, n1, n2, I = 1j
    for i in range(ni):
        for j in range(nj):
            a = kx[i, j]
            b = ky[i, j]
            sf = sfac[i, j]
            cf = cfac[i, j]
            u0 = s[i, j]
            u1 = w1[i, j]
            u2 = w2[i, j]
            m0 = -I * (a * u1 + b * u2)
            m1 = -I * a * u0 + u2
            m2 = -I * b * u0 - u1
            n0 = -I * (a * m1 + b * m2)
            n1 = -I * a * m0 + m2
            n2 = -I * b * m0 - m1
            s[i, j] = u0 + sf * m0 + cf * n0
            w1[i, j] = u1 + sf * m1 + cf * n1
            w2[i, j] = u2 + sf * m2 + cf * n2


def relative_pressure_grid(
    double[:, ::1] rho,
    double[:, ::1] r,
    double gamma,
    double[:, ::1] out,
):
    """out = P(rho) - P(r) - P'(r)*(rho - r) with P(x) = (x^gamma - x)/(gamma*(gamma-1))."""
    cdef Py_ssize_t ni = rho.shape[0], nj = rho.shape[1], i, j
    cdef double c, x, y, d
    if gamma == 2.0:
        for i in range(ni):
            for j in range(nj):
                d = rho[i, j] - r[i, j]
                out[i, j] = 0.5 * d * d
        return
    c = 1.0 / (gamma * (gamma - 1.0))
    for i in range(ni):
        for j in range(nj):
            x = rho[i, j]
            y = r[i, j]
            out[i, j] = (
                (pow(x, gamma) - x) * c
                - (pow(y, gamma) - y) * c
                - (gamma * pow(y, gamma - 1.0) - 1.0) * c * (x - y)
            )


def pressure_remainder_grid(
    double[:, ::1] rho,
    double gamma,
    double[:, ::1] out,
):
    """out = p(rho) - p(1) - p'(1)*(rho - 1) with p(x) = x^gamma / gamma."""
    cdef Py_ssize_t ni = rho.shape[0], nj = rho.shape[1], i, j
    cdef double x, d
    if gamma == 2.0:
        for i in range(ni):
            for j in range(nj):
                d = rho[i, j] - 1.0
                out[i, j] = 0.5 * d * d
        return
    for i in range(ni):
        for j in range(nj):
            x = rho[i, j]
            out[i, j] = (pow(x, gamma) - 1.0) / gamma - (x - 1.0)
