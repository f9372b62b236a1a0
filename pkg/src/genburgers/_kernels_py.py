"""Pure numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` step for step (same subdivision policy, same
interval ordering), so both backends converge to the same answer.
"""

import numpy as np

# Gauss-Kronrod 7/15 rule on [-1, 1] (QUADPACK qk15)
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
KWEIGHTS = np.concatenate([WGK[:-1], WGK[::-1]])
GWEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes
GWEIGHTS[[1, 3, 5]] = WG[:3]
GWEIGHTS[7] = WG[3]
GWEIGHTS[[9, 11, 13]] = WG[2::-1]


def _gk15(pc, ic, ih, q0, q1, q2, uval, uslope, inv_nu):
    """Kronrod and Gauss estimates of the moment vector on each interval."""
    w = (ic - pc)[:, None] + ih[:, None] * NODES[None, :]
    expo = (q0[:, None] + w * (q1[:, None] + w * q2[:, None])) * inv_nu
    f = np.exp(-expo)
    n = uval.shape[1]
    vals = np.empty((ic.size, 15, n + 1))
    vals[:, :, 0] = f
    vals[:, :, 1:] = f[:, :, None] * (uval[:, None, :] + uslope[:, None, :] * w[:, :, None])
    k = np.einsum("ijk,j->ik", vals, KWEIGHTS) * ih[:, None]
    g = np.einsum("ijk,j->ik", vals, GWEIGHTS) * ih[:, None]
    return k, g


def hopf_cole_moments(center, half, q0, q1, q2, uval, uslope, scale, inv_nu, rel_tol, max_subdiv):
    """Adaptive integral of ``exp(-q(w)/nu) * [1, u_1(w), ..., u_N(w)]`` over a set of pieces.

    Piece ``p`` spans ``center[p] +- half[p]`` and ``q``, ``u`` are expanded
    about its centre.  Returns ``(moments, error, n_intervals, converged)``.
    """
    center = np.ascontiguousarray(center, dtype=float)
    half = np.ascontiguousarray(half, dtype=float)
    uval = np.ascontiguousarray(uval, dtype=float)
    uslope = np.ascontiguousarray(uslope, dtype=float)
    inv_scale = 1.0 / np.maximum(np.asarray(scale, dtype=float), 1e-300)
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)

    piece = np.arange(center.size)
    ic, ih = center.copy(), half.copy()
    k, g = _gk15(center, ic, ih, q0, q1, q2, uval, uslope, inv_nu)

    while True:
        diff = np.abs(k - g)
        e = np.maximum(diff[:, 0], np.max(diff[:, 1:] * inv_scale, axis=1))
        den = k[:, 0].sum()
        err = e.sum()
        n = ic.size
        if err <= rel_tol * den:
            return k.sum(axis=0), err / den, n, True
        if n >= max_subdiv:
            return k.sum(axis=0), err / den, n, False
        share = rel_tol * den / n
        cand = np.flatnonzero(e > share)
        cap = max_subdiv - n
        if cand.size > cap:
            order = np.argsort(-e[cand], kind="stable")[:cap]
            cand = np.sort(cand[order])
        p = piece[cand]
        hh = 0.5 * ih[cand]
        left_c = ic[cand] - hh
        right_c = ic[cand] + hh
        ic[cand] = left_c
        ih[cand] = hh
        ic = np.concatenate([ic, right_c])
        ih = np.concatenate([ih, hh])
        piece = np.concatenate([piece, p])
        both = np.concatenate([cand, np.arange(n, n + cand.size)])
        pb = piece[both]
        kb, gb = _gk15(center[pb], ic[both], ih[both], q0[pb], q1[pb], q2[pb],
                       uval[pb], uslope[pb], inv_nu)
        k = np.concatenate([k, np.empty((cand.size, k.shape[1]))])
        g = np.concatenate([g, np.empty((cand.size, g.shape[1]))])
        k[both] = kb
        g[both] = gb


def fd_advance(u, c, dt, dx, nu, nsteps):
    """Advance ``u`` (shape ``(N, nx)``) in place by ``nsteps`` explicit steps.

    Upwind advection with the shared speed ``sigma = c . u`` taken at cell
    interfaces as the mean of its neighbours, so the update of ``sigma``
    itself is in conservation form.  Central diffusion with coefficient
    ``nu/2``.  End cells are held fixed.
    """
    c = np.asarray(c, dtype=float)
    a = dt / dx
    d = 0.5 * nu * dt / (dx * dx)
    for _ in range(nsteps):
        s = c @ u
        sh = 0.5 * (s[1:] + s[:-1])
        du = u[:, 1:] - u[:, :-1]
        adv = np.maximum(sh, 0.0)[:-1] * du[:, :-1] + np.minimum(sh, 0.0)[1:] * du[:, 1:]
        u[:, 1:-1] += d * (du[:, 1:] - du[:, :-1]) - a * adv
    return u
