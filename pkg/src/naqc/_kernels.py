"""Hot numerical kernels behind the functional optimizer.

Compiled with numba when available; the same code runs (slowly) as plain
Python otherwise.  Everything here works on packed angle vectors and the
Bloch data (r_B, T) of the directed state.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def eval_objective(x, rb, tm, standard, full, optimize_pairing):
    """Detection objective at packed angles ``x``.

    Layout: 3 Euler angles (standard) or 6 spherical axis angles
    (generalized), followed by the triad angles (theta, phi[, chi]).
    Returns the coherence sum, maximized over the six pairings when
    ``optimize_pairing`` is set.
    """
    ax = np.empty((3, 3))
    if standard:
        ca, sa = math.cos(x[0]), math.sin(x[0])
        cb, sb = math.cos(x[1]), math.sin(x[1])
        cg, sg = math.cos(x[2]), math.sin(x[2])
        # columns of Rz(a) Ry(b) Rz(g): an orthonormal measurement frame
        ax[0, 0] = ca * cb * cg - sa * sg
        ax[0, 1] = sa * cb * cg + ca * sg
        ax[0, 2] = -sb * cg
        ax[1, 0] = -ca * cb * sg - sa * cg
        ax[1, 1] = -sa * cb * sg + ca * cg
        ax[1, 2] = sb * sg
        ax[2, 0] = ca * sb
        ax[2, 1] = sa * sb
        ax[2, 2] = cb
        k = 3
    else:
        for i in range(3):
            st = math.sin(x[2 * i])
            ax[i, 0] = st * math.cos(x[2 * i + 1])
            ax[i, 1] = st * math.sin(x[2 * i + 1])
            ax[i, 2] = math.cos(x[2 * i])
        k = 6
    st, ct = math.sin(x[k]), math.cos(x[k])
    sp, cp = math.sin(x[k + 1]), math.cos(x[k + 1])
    ms = np.empty((3, 3))
    ms[0, 0] = st * cp
    ms[0, 1] = st * sp
    ms[0, 2] = ct
    e1x, e1y, e1z = -ct * cp, -ct * sp, st
    e2x, e2y, e2z = sp, -cp, 0.0
    if full:
        cx, sx = math.cos(x[k + 2]), math.sin(x[k + 2])
        ms[1, 0] = cx * e1x + sx * e2x
        ms[1, 1] = cx * e1y + sx * e2y
        ms[1, 2] = cx * e1z + sx * e2z
        ms[2, 0] = cx * e2x - sx * e1x
        ms[2, 1] = cx * e2y - sx * e1y
        ms[2, 2] = cx * e2z - sx * e1z
    else:
        ms[1, 0], ms[1, 1], ms[1, 2] = e1x, e1y, e1z
        ms[2, 0], ms[2, 1], ms[2, 2] = e2x, e2y, e2z
    g = np.empty((3, 3))
    for i in range(3):
        vx = tm[0, 0] * ax[i, 0] + tm[1, 0] * ax[i, 1] + tm[2, 0] * ax[i, 2]
        vy = tm[0, 1] * ax[i, 0] + tm[1, 1] * ax[i, 1] + tm[2, 1] * ax[i, 2]
        vz = tm[0, 2] * ax[i, 0] + tm[1, 2] * ax[i, 1] + tm[2, 2] * ax[i, 2]
        px, py, pz = rb[0] + vx, rb[1] + vy, rb[2] + vz
        qx, qy, qz = rb[0] - vx, rb[1] - vy, rb[2] - vz
        p2 = px * px + py * py + pz * pz
        q2 = qx * qx + qy * qy + qz * qz
        for j in range(3):
            dp = px * ms[j, 0] + py * ms[j, 1] + pz * ms[j, 2]
            dq = qx * ms[j, 0] + qy * ms[j, 1] + qz * ms[j, 2]
            gp = p2 - dp * dp
            gq = q2 - dq * dq
            sgp = math.sqrt(gp) if gp > 0.0 else 0.0
            sgq = math.sqrt(gq) if gq > 0.0 else 0.0
            g[i, j] = 0.5 * (sgp + sgq)
    if not optimize_pairing:
        return g[0, 0] + g[1, 1] + g[2, 2]
    best = g[0, 0] + g[1, 1] + g[2, 2]
    v = g[0, 0] + g[1, 2] + g[2, 1]
    if v > best:
        best = v
    v = g[0, 1] + g[1, 0] + g[2, 2]
    if v > best:
        best = v
    v = g[0, 1] + g[1, 2] + g[2, 0]
    if v > best:
        best = v
    v = g[0, 2] + g[1, 0] + g[2, 1]
    if v > best:
        best = v
    v = g[0, 2] + g[1, 1] + g[2, 0]
    if v > best:
        best = v
    return best


@njit(cache=True)
def nelder_mead_max(pts, vals, have_vals, rb, tm, standard, full,
                    optimize_pairing, xatol, fatol, maxiter):
    """Simplex maximization of the objective; resumable via (pts, vals).

    Stops when both the coordinate spread and the value spread of the
    simplex fall below the tolerances.  Returns the (sorted) simplex, its
    values, a convergence flag and the evaluation count.
    """
    m, n = pts.shape[0], pts.shape[1]
    nfev = 0
    if not have_vals:
        for i in range(m):
            vals[i] = eval_objective(pts[i], rb, tm, standard, full,
                                     optimize_pairing)
        nfev += m
    refl = np.empty(n)
    expd = np.empty(n)
    cont = np.empty(n)
    centroid = np.empty(n)
    converged = False
    for _ in range(maxiter):
        order = np.argsort(-vals)
        pts = pts[order]
        vals = vals[order]
        spread = 0.0
        for i in range(1, m):
            for j in range(n):
                d = abs(pts[i, j] - pts[0, j])
                if d > spread:
                    spread = d
        if spread < xatol and vals[0] - vals[m - 1] < fatol:
            converged = True
            break
        for j in range(n):
            s = 0.0
            for i in range(n):
                s += pts[i, j]
            centroid[j] = s / n
        for j in range(n):
            refl[j] = 2.0 * centroid[j] - pts[n, j]
        fr = eval_objective(refl, rb, tm, standard, full, optimize_pairing)
        nfev += 1
        if fr > vals[0]:
            for j in range(n):
                expd[j] = 3.0 * centroid[j] - 2.0 * pts[n, j]
            fe = eval_objective(expd, rb, tm, standard, full, optimize_pairing)
            nfev += 1
            if fe > fr:
                pts[n] = expd
                vals[n] = fe
            else:
                pts[n] = refl
                vals[n] = fr
        elif fr > vals[n - 1]:
            pts[n] = refl
            vals[n] = fr
        else:
            for j in range(n):
                cont[j] = 0.5 * (centroid[j] + pts[n, j])
            fc = eval_objective(cont, rb, tm, standard, full, optimize_pairing)
            nfev += 1
            if fc > vals[n]:
                pts[n] = cont
                vals[n] = fc
            else:
                for i in range(1, m):
                    for j in range(n):
                        pts[i, j] = 0.5 * (pts[i, j] + pts[0, j])
                    vals[i] = eval_objective(pts[i], rb, tm, standard, full,
                                             optimize_pairing)
                nfev += n
    return pts, vals, converged, nfev
