"""Compare the compiled kernels against the NumPy fallback.

Run as:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from dualcurve import _backend


def _time(fn, *args, repeats=5, **kwargs):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best, out

def main():
    rng = np.random.default_rng(7)

    n_pts, n_groups = 400_000, 64
    pts = rng.normal(size=(n_pts, 3))
    wts = rng.uniform(0.1, 1.0, size=n_pts)
    ids = rng.integers(0, n_groups, size=n_pts)

    n_dirs, n_facets = 200_000, 40
    vs = rng.normal(size=(n_facets, 3))
    vs /= np.linalg.norm(vs, axis=1, keepdims=True)
    hs = rng.uniform(0.5, 2.0, size=n_facets)
    us = rng.normal(size=(n_dirs, 3))
    us /= np.linalg.norm(us, axis=1, keepdims=True)

    print(f"built backends: python{' + cython' if _backend.BACKEND == 'cython' else ' only'}")
    rows = []
    for name in ("python", "cython"):
        try:
            _backend.use(name)
        except ImportError:
            print(f"{name}: extension not built, skipping")
            continue
        t1, s1 = _time(_backend.facet_power_sums, pts, wts, ids, n_groups, -0.5)
        t2, r1 = _time(_backend.radial_batch, vs, hs, us)
        rows.append((name, t1, t2, s1, r1))
        print(f"{name:>7}  facet_power_sums: {t1 * 1e3:8.2f} ms   radial_batch: {t2 * 1e3:8.2f} ms")

    if len(rows) == 2:
        (_, ta1, ta2, sa, ra), (_, tb1, tb2, sb, rb) = rows
        assert np.allclose(sa, sb, rtol=1e-12)
        assert np.allclose(ra[0], rb[0], rtol=1e-12) and (ra[1] == rb[1]).all()
        print(f"speedup: facet_power_sums x{ta1 / tb1:.1f}, radial_batch x{ta2 / tb2:.1f}")
    _backend.use("cython" if len(rows) == 2 else "python")


if __name__ == "__main__":
    main()
