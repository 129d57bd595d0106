"""Optional compiled kernels for the hot inner loops.

``speedups`` is the compiled module, or None when it is unavailable (no
compiler, or ``IKL_PURE=1`` in the environment). Call sites keep a pure-Python
path next to every kernel call, so the package works either way. Tests and the
benchmark flip ``speedups`` to compare both implementations.
"""

import os

speedups = None

if os.environ.get("IKL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _speedups as speedups  # type: ignore[no-redef]
    except ImportError:
        speedups = None


def available() -> bool:
    return speedups is not None
