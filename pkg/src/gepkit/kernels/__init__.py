"""Elimination kernels: compiled extension when built, pure Python otherwise.

Set ``GEPKIT_PURE=1`` to force the fallback.  ``BACKEND`` names the one in use.
"""

import os

from . import _pyelim

_BACKENDS = {"python": _pyelim}

try:
    from . import _cyelim  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _cyelim = None
else:
    _BACKENDS["cython"] = _cyelim

if _cyelim is not None and os.environ.get("GEPKIT_PURE", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = _BACKENDS[BACKEND]
echelon_int = _active.echelon_int
echelon_gauss = _active.echelon_gauss


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str):
    return _BACKENDS[name]
