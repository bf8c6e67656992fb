"""Kernel backend selection.

The trajectory chunk kernel exists twice: a Cython extension
(``_cykernel``) and a NumPy fallback (``_pykernel``) that produce
bit-identical outputs.  The compiled one is preferred when importable;
set ``BINQWALK_BACKEND=python`` or ``=cython`` to force a choice at
import time.
"""

import os

from . import _pykernel

try:
    from . import _cykernel

    HAVE_EXTENSION = True
except ImportError:
    _cykernel = None
    HAVE_EXTENSION = False

_BACKENDS = {"python": _pykernel}
if HAVE_EXTENSION:
    _BACKENDS["cython"] = _cykernel


def get_backend(name: str):
    """Kernel module for an explicit backend name ('python' or 'cython')."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} not available; choices: {sorted(_BACKENDS)}"
        ) from None


_requested = os.environ.get("BINQWALK_BACKEND", "auto").lower()
if _requested == "auto":
    BACKEND = "cython" if HAVE_EXTENSION else "python"
elif _requested in _BACKENDS:
    BACKEND = _requested
else:
    raise ImportError(
        f"BINQWALK_BACKEND={_requested!r} is not available; "
        f"choices: auto, {', '.join(sorted(_BACKENDS))}"
    )

run_chunk = _BACKENDS[BACKEND].run_chunk
