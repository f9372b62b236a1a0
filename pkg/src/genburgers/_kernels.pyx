# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see ``_kernels_py`` for the reference)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()

from ._kernels_py import NODES as _NODES, KWEIGHTS as _KW, GWEIGHTS as _GW

cdef double[15] NODES
cdef double[15] KW
cdef double[15] GW
for _i in range(15):
    NODES[_i] = _NODES[_i]
    KW[_i] = _KW[_i]
    GW[_i] = _GW[_i]


cdef void _gk15(Py_ssize_t i, Py_ssize_t p, const double[::1] pc, double[::1] ic, double[::1] ih,
                const double[::1] q0, const double[::1] q1, const double[::1] q2,
                const double[:, ::1] uval, const double[:, ::1] uslope, double inv_nu,
                double[:, ::1] k, double[:, ::1] g) noexcept nogil:
    cdef Py_ssize_t n = uval.shape[1]
    cdef Py_ssize_t j, m
    cdef double w, f, base = ic[i] - pc[p], h = ih[i], u
    for m in range(n + 1):
        k[i, m] = 0.0
        g[i, m] = 0.0
    for j in range(15):
        w = base + h * NODES[j]
        f = exp(-(q0[p] + w * (q1[p] + w * q2[p])) * inv_nu)
        k[i, 0] += KW[j] * f
        g[i, 0] += GW[j] * f
        for m in range(n):
            u = f * (uval[p, m] + uslope[p, m] * w)
            k[i, m + 1] += KW[j] * u
            g[i, m + 1] += GW[j] * u
    for m in range(n + 1):
        k[i, m] *= h
        g[i, m] *= h


def hopf_cole_moments(center, half, q0, q1, q2, uval, uslope, scale,
                      double inv_nu, double rel_tol, Py_ssize_t max_subdiv):
    cdef const double[::1] pc = np.ascontiguousarray(center, dtype=float)
    cdef const double[::1] ph = np.ascontiguousarray(half, dtype=float)
    cdef const double[::1] a0 = np.ascontiguousarray(q0, dtype=float)
    cdef const double[::1] a1 = np.ascontiguousarray(q1, dtype=float)
    cdef const double[::1] a2 = np.ascontiguousarray(q2, dtype=float)
    cdef const double[:, ::1] uv = np.ascontiguousarray(uval, dtype=float)
    cdef const double[:, ::1] us = np.ascontiguousarray(uslope, dtype=float)
    cdef const double[::1] isc = 1.0 / np.maximum(np.asarray(scale, dtype=float), 1e-300)
    cdef Py_ssize_t npieces = pc.shape[0], ncomp = uv.shape[1]
    cdef Py_ssize_t cap = max(max_subdiv, npieces)

    cdef double[::1] ic = np.empty(cap)
    cdef double[::1] ih = np.empty(cap)
    cdef Py_ssize_t[::1] piece = np.empty(cap, dtype=np.intp)
    cdef double[:, ::1] k = np.empty((cap, ncomp + 1))
    cdef double[:, ::1] g = np.empty((cap, ncomp + 1))
    cdef double[::1] e = np.empty(cap)
    cdef Py_ssize_t[::1] cand = np.empty(cap, dtype=np.intp)

    cdef Py_ssize_t i, m, n = npieces, ncand, c, room, p
    cdef double den, err, share, d, hh, em
    cdef bint converged = False

    with nogil:
        for i in range(n):
            ic[i] = pc[i]
            ih[i] = ph[i]
            piece[i] = i
            _gk15(i, i, pc, ic, ih, a0, a1, a2, uv, us, inv_nu, k, g)

    while True:
        with nogil:
            den = 0.0
            err = 0.0
            for i in range(n):
                em = fabs(k[i, 0] - g[i, 0])
                for m in range(ncomp):
                    d = fabs(k[i, m + 1] - g[i, m + 1]) * isc[m]
                    if d > em:
                        em = d
                e[i] = em
                den += k[i, 0]
                err += em
            if err <= rel_tol * den:
                converged = True
            elif n < max_subdiv:
                share = rel_tol * den / n
                ncand = 0
                for i in range(n):
                    if e[i] > share:
                        cand[ncand] = i
                        ncand += 1
        if converged or n >= max_subdiv:
            break
        room = max_subdiv - n
        if ncand > room:
            sel = np.asarray(cand[:ncand])
            order = np.argsort(-np.asarray(e)[sel], kind="stable")[:room]
            sel = np.sort(sel[order])
            ncand = room
            for i in range(ncand):
                cand[i] = sel[i]
        with nogil:
            for i in range(ncand):
                c = cand[i]
                p = piece[c]
                hh = 0.5 * ih[c]
                ic[n + i] = ic[c] + hh
                ih[n + i] = hh
                piece[n + i] = p
                ic[c] = ic[c] - hh
                ih[c] = hh
                _gk15(c, p, pc, ic, ih, a0, a1, a2, uv, us, inv_nu, k, g)
            for i in range(ncand):
                _gk15(n + i, piece[n + i], pc, ic, ih, a0, a1, a2, uv, us, inv_nu, k, g)
            n += ncand

    moments = np.asarray(k[:n]).sum(axis=0)
    return moments, err / den, n, bool(converged)


def fd_advance(double[:, ::1] u, c, double dt, double dx, double nu, Py_ssize_t nsteps):
    cdef const double[::1] cc = np.ascontiguousarray(c, dtype=float)
    cdef Py_ssize_t ncomp = u.shape[0], nx = u.shape[1]
    cdef double[:, ::1] nxt = np.array(u, copy=True)
    cdef double[::1] s = np.empty(nx)
    cdef double a = dt / dx, dd = 0.5 * nu * dt / (dx * dx)
    cdef Py_ssize_t step, i, j
    cdef double back, fwd, adv, sl, sr
    with nogil:
        for step in range(nsteps):
            for i in range(nx):
                s[i] = 0.0
            for j in range(ncomp):
                for i in range(nx):
                    s[i] += cc[j] * u[j, i]
            for j in range(ncomp):
                for i in range(1, nx - 1):
                    back = u[j, i] - u[j, i - 1]
                    fwd = u[j, i + 1] - u[j, i]
                    sl = 0.5 * (s[i] + s[i - 1])
                    sr = 0.5 * (s[i + 1] + s[i])
                    adv = 0.0
                    if sl > 0:
                        adv = sl * back
                    if sr < 0:
                        adv = adv + sr * fwd
                    nxt[j, i] = u[j, i] + (dd * (fwd - back) - a * adv)
            for j in range(ncomp):
                for i in range(1, nx - 1):
                    u[j, i] = nxt[j, i]
    return np.asarray(u)
