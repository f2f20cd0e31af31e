"""Kernel selection: compiled accelerator when present, pure Python otherwise.

The two implementations share one contract (see :mod:`bicext._pyops` for the
reference).  Set the environment variable ``BICEXT_PURE=1`` before import to
force the pure backend even when the compiled one is installed.
"""

import os

from . import _pyops

if os.environ.get("BICEXT_PURE"):
    _impl = _pyops
else:
    try:
        from . import _fastops as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pyops

BACKEND = _impl.BACKEND
mul6 = _impl.mul6
product_table = _impl.product_table
assoc_violation = _impl.assoc_violation
retraction_scan = _impl.retraction_scan
closure_fixpoint = _impl.closure_fixpoint


def available_backends():
    """Importable kernel modules keyed by name (for benchmarks and tests)."""
    found = {"pure": _pyops}
    try:
        from . import _fastops
        found["compiled"] = _fastops
    except ImportError:
        pass
    return found
