"""Backend selection for the grid-search kernel.

The compiled extension is used when it imports; otherwise the numpy version.
Set ``FAIRGEOM_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _grid_kernel_py

if os.environ.get("FAIRGEOM_PURE_PYTHON") == "1":
    _compiled = None
else:
    try:
        from . import _grid_kernel as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
search_grid = _compiled.search_grid if _compiled is not None else _grid_kernel_py.search_grid

BACKENDS = {"numpy": _grid_kernel_py.search_grid}
if _compiled is not None:
    BACKENDS["cython"] = _compiled.search_grid
