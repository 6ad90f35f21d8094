"""Kernel backend selection: compiled extension if built, NumPy otherwise."""

from . import _kernels_py

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _kernels_py
    BACKEND = "python"

facet_power_sums = _impl.facet_power_sums
radial_batch = _impl.radial_batch


def use(name):
    """Force a backend ("cython" or "python"); for benchmarks and tests."""
    global _impl, BACKEND, facet_power_sums, radial_batch
    if name == "python":
        _impl = _kernels_py
    elif name == "cython":
        from . import _kernels as _impl  # raises ImportError if not built
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name
    facet_power_sums = _impl.facet_power_sums
    radial_batch = _impl.radial_batch
