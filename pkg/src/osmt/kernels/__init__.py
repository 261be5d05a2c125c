"""Hot-path kernels with a compiled core and a pure-numpy fallback.

The compiled extension is preferred when importable; set ``OSMT_PURE_PY=1``
to force the fallback (useful for benchmarking and debugging). Both backends
implement identical math; ``BACKEND`` names the one in use.
"""

import os

from . import _pykernels

if os.environ.get("OSMT_PURE_PY"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND_NAME

lstm_cell_forward = _impl.lstm_cell_forward
lstm_cell_backward = _impl.lstm_cell_backward

__all__ = ["BACKEND", "lstm_cell_forward", "lstm_cell_backward"]
