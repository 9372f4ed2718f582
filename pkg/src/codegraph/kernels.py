"""Backend selection for the hot kernels.

The compiled extension is used when it was built and importable; setting
``CODEGRAPH_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from codegraph._pykernels import IDENT, LITERAL, NUMBER, OP

if os.environ.get("CODEGRAPH_PURE_PYTHON", "") not in ("", "0"):
    from codegraph import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from codegraph import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        from codegraph import _pykernels as _impl

        BACKEND = "python"

lex_java = _impl.lex_java
accumulate_scores = _impl.accumulate_scores

__all__ = ["BACKEND", "IDENT", "LITERAL", "NUMBER", "OP", "accumulate_scores", "lex_java"]
