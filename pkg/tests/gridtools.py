"""Brute-force grid oracles for the optimizer, independent of its search path.

The batched evaluator mirrors the detection objective (standard mode, full
triad family, optimized pairing) with vectorized numpy, and is exercised
over dense and iteratively refined angle grids.
"""

import itertools

import numpy as np

PERMS = tuple(itertools.permutations(range(3)))


def standard_objective_batch(r_b, tmat, params):
    """Objective at a batch of (euler a, b, g, triad theta, phi, chi) rows."""
    params = np.asarray(params, dtype=float)
    a, b, g = params[:, 0], params[:, 1], params[:, 2]
    th, ph, ch = params[:, 3], params[:, 4], params[:, 5]
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    cg, sg = np.cos(g), np.sin(g)
    n = params.shape[0]
    axes = np.empty((n, 3, 3))
    axes[:, 0, 0] = ca * cb * cg - sa * sg
    axes[:, 0, 1] = sa * cb * cg + ca * sg
    axes[:, 0, 2] = -sb * cg
    axes[:, 1, 0] = -ca * cb * sg - sa * cg
    axes[:, 1, 1] = -sa * cb * sg + ca * cg
    axes[:, 1, 2] = sb * sg
    axes[:, 2, 0] = ca * sb
    axes[:, 2, 1] = sa * sb
    axes[:, 2, 2] = cb
    st, ct = np.sin(th), np.cos(th)
    sp, cp = np.sin(ph), np.cos(ph)
    cx, sx = np.cos(ch), np.sin(ch)
    ms = np.empty((n, 3, 3))
    ms[:, 0, 0], ms[:, 0, 1], ms[:, 0, 2] = st * cp, st * sp, ct
    e1 = np.stack([-ct * cp, -ct * sp, st], axis=1)
    e2 = np.stack([sp, -cp, np.zeros(n)], axis=1)
    ms[:, 1] = cx[:, None] * e1 + sx[:, None] * e2
    ms[:, 2] = cx[:, None] * e2 - sx[:, None] * e1
    v = axes @ np.asarray(tmat, dtype=float)
    up = r_b[None, None, :] + v
    um = r_b[None, None, :] - v
    p2 = np.einsum("nik,nik->ni", up, up)
    q2 = np.einsum("nik,nik->ni", um, um)
    dp = np.einsum("nik,njk->nij", up, ms)
    dq = np.einsum("nik,njk->nij", um, ms)
    gmat = 0.5 * (np.sqrt(np.clip(p2[:, :, None] - dp ** 2, 0.0, None))
                  + np.sqrt(np.clip(q2[:, :, None] - dq ** 2, 0.0, None)))
    vals = np.full(n, -np.inf)
    for p in PERMS:
        np.maximum(vals, gmat[:, 0, p[0]] + gmat[:, 1, p[1]] + gmat[:, 2, p[2]],
                   out=vals)
    return vals


def _product_grid(centers, widths, counts):
    axes_1d = [np.linspace(c - w / 2.0, c + w / 2.0, k)
               for c, w, k in zip(centers, widths, counts)]
    mesh = np.meshgrid(*axes_1d, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def dense_grid_max(r_b, tmat, counts=(12, 7, 12, 7, 12, 12), chunk=200_000):
    """Single-stage dense grid over the 6 standard-mode angles.

    The grids start at 0 with steps of pi/6, so frames and triads aligned
    with the coordinate axes are sampled exactly.
    """
    ranges = (2 * np.pi, np.pi, 2 * np.pi, np.pi, 2 * np.pi, 2 * np.pi)
    axes_1d = []
    for r, k in zip(ranges, counts):
        # endpoint excluded on the periodic 2*pi axes, included on [0, pi]
        if r == np.pi:
            axes_1d.append(np.linspace(0.0, r, k))
        else:
            axes_1d.append(np.linspace(0.0, r, k, endpoint=False))
    mesh = np.meshgrid(*axes_1d, indexing="ij")
    params = np.stack([m.ravel() for m in mesh], axis=1)
    best = -np.inf
    for i in range(0, params.shape[0], chunk):
        vals = standard_objective_batch(r_b, tmat, params[i:i + chunk])
        best = max(best, float(vals.max()))
    return best, params.shape[0]


def zoom_grid_max(r_b, tmat, rounds=7, pts=7):
    """Iteratively refined grid search; returns the refined maximum."""
    centers = np.array([np.pi, np.pi / 2, np.pi, np.pi / 2, np.pi, np.pi])
    widths = np.array([2 * np.pi, np.pi, 2 * np.pi, np.pi, 2 * np.pi, 2 * np.pi])
    best_val = -np.inf
    for _ in range(rounds):
        params = _product_grid(centers, widths, [pts] * 6)
        vals = standard_objective_batch(r_b, tmat, params)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
        centers = params[i]
        widths = widths * (2.5 / (pts - 1))
    return best_val


def triad_sum_zoom_max(r, rounds=6, pts=15):
    """Refined grid maximum of the coherence sum over full-family triads."""
    r = np.asarray(r, dtype=float)
    centers = np.array([np.pi / 2, np.pi, np.pi])
    widths = np.array([np.pi, 2 * np.pi, 2 * np.pi])
    best_val = -np.inf
    for _ in range(rounds):
        params = _product_grid(centers, widths, [pts] * 3)
        th, ph, ch = params[:, 0], params[:, 1], params[:, 2]
        st, ct = np.sin(th), np.cos(th)
        sp, cp = np.sin(ph), np.cos(ph)
        cx, sx = np.cos(ch), np.sin(ch)
        n = params.shape[0]
        ms = np.empty((n, 3, 3))
        ms[:, 0, 0], ms[:, 0, 1], ms[:, 0, 2] = st * cp, st * sp, ct
        e1 = np.stack([-ct * cp, -ct * sp, st], axis=1)
        e2 = np.stack([sp, -cp, np.zeros(n)], axis=1)
        ms[:, 1] = cx[:, None] * e1 + sx[:, None] * e2
        ms[:, 2] = cx[:, None] * e2 - sx[:, None] * e1
        dots = np.einsum("nij,j->ni", ms, r)
        vals = np.sqrt(np.clip(float(r @ r) - dots ** 2, 0.0, None)).sum(axis=1)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
        centers = params[i]
        widths = widths * (2.5 / (pts - 1))
    return best_val
