import numpy as np
import pytest

from dualcurve import GeometryError, HPolytope


def random_symmetric_polytope(rng, dim=3, pairs=5, h_lo=0.7, h_hi=1.5,
                              require_all_active=True, max_tries=200):
    """Origin-symmetric H-polytope with the requested number of facet pairs."""
    for _ in range(max_tries):
        v = rng.normal(size=(pairs, dim))
        norms = np.linalg.norm(v, axis=1)
        if (norms < 1e-9).any():
            continue
        v /= norms[:, None]
        # reject nearly parallel pairs up front
        g = np.abs(v @ v.T)
        np.fill_diagonal(g, 0.0)
        if g.max() > 0.999:
            continue
        h = rng.uniform(h_lo, h_hi, size=pairs)
        try:
            p = HPolytope(np.vstack([v, -v]), np.concatenate([h, h]))
        except GeometryError:
            continue
        if not require_all_active or p.active.all():
            return p
    raise RuntimeError("could not generate a polytope; loosen the constraints")


def axis_box(lo, hi):
    """Axis-aligned box [lo, hi] as an HPolytope."""
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    dim = len(lo)
    normals, offsets = [], []
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = 1.0
        normals.extend([e.copy(), -e])
        offsets.extend([hi[k], -lo[k]])
    return HPolytope(np.array(normals), np.array(offsets))


def cube(dim=3, half_width=1.0):
    return axis_box(-half_width * np.ones(dim), half_width * np.ones(dim))


def random_even_measure(rng, dim=3, pairs=4, w_lo=0.2, w_hi=1.0):
    from dualcurve import DiscreteSphericalMeasure

    while True:
        v = rng.normal(size=(pairs, dim))
        norms = np.linalg.norm(v, axis=1)
        if (norms < 1e-9).any():
            continue
        v /= norms[:, None]
        g = np.abs(v @ v.T)
        np.fill_diagonal(g, 0.0)
        if g.max() > 0.999:
            continue
        w = rng.uniform(w_lo, w_hi, size=pairs)
        return DiscreteSphericalMeasure(np.vstack([v, -v]), np.concatenate([w, w]))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
