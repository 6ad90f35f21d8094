"""Pure-NumPy fallback for the compiled kernels.

Same signatures and semantics as the Cython module ``_kernels``; used when
the extension was not built.  All arrays are float64.
"""

import numpy as np


def facet_power_sums(points, weights, ids, n_groups, expo):
    """Per-group sums of w * |x|**expo.

    points : (N, d) quadrature points, weights : (N,), ids : (N,) int group
    index of each point.  Returns (n_groups,) array.
    """
    points = np.asarray(points, float)
    weights = np.asarray(weights, float)
    r = np.sqrt(np.einsum("ij,ij->i", points, points))
    if expo == 0.0:
        vals = weights
    else:
        vals = weights * r**expo
    return np.bincount(np.asarray(ids), weights=vals, minlength=n_groups)[:n_groups]


def radial_batch(normals, offsets, dirs, tie_tol=1e-10):
    """Radial function of {x : x.v_i <= h_i} on a batch of unit directions.

    Returns (rho, idx, tie): the min of h_i/(u.v_i) over i with u.v_i > 0,
    the argmin facet, and whether a second facet ties within relative
    tie_tol (the direction then lies on a cone boundary).
    """
    normals = np.asarray(normals, float)
    offsets = np.asarray(offsets, float)
    dirs = np.atleast_2d(np.asarray(dirs, float))
    dots = dirs @ normals.T  # (N, m)
    with np.errstate(divide="ignore", over="ignore"):
        cand = np.where(dots > 0.0, offsets / dots, np.inf)
    idx = np.argmin(cand, axis=1)
    rho = cand[np.arange(len(dirs)), idx]
    # second-smallest candidate for the tie test
    cand2 = cand.copy()
    cand2[np.arange(len(dirs)), idx] = np.inf
    second = cand2.min(axis=1)
    tie = (second - rho) <= tie_tol * rho
    return rho, idx.astype(np.int64), tie
