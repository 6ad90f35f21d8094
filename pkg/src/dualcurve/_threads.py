"""Worker-count helper honoring the DUALCURVE_THREADS environment variable."""

import os

_ENV = "DUALCURVE_THREADS"


def worker_count() -> int:
    """Number of worker threads modules may use (>= 1)."""
    raw = os.environ.get(_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
