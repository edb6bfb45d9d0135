"""Backend selection for the enumeration kernel.

The compiled extension is used when it was built; otherwise the numpy
version.  Set ``FULLGROUP_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

_forced = os.environ.get("FULLGROUP_BACKEND", "").lower()

try:
    if _forced == "python":
        raise ImportError("fallback forced by FULLGROUP_BACKEND")
    from ._kernel import count_range as _compiled_count_range
except ImportError:
    _compiled_count_range = None

BACKENDS = {"python": _fallback.count_range}
if _compiled_count_range is not None:
    BACKENDS["compiled"] = _compiled_count_range

BACKEND = "compiled" if _compiled_count_range is not None else "python"
count_range = BACKENDS[BACKEND]
