"""Kernel selection for canonical labeling.

Prefers the compiled extension; falls back to the pure-Python twin when the
extension is missing, when ``ESEQUIV_KERNEL=python`` is set, or for inputs
beyond the compiled kernel's 64-event limit.  Both kernels produce
byte-identical encodings.
"""

import os

from . import _canon_py

try:
    from . import _canonc
except ImportError:  # pragma: no cover - depends on build environment
    _canonc = None

if _canonc is not None and os.environ.get("ESEQUIV_KERNEL") != "python":
    _default = _canonc
else:
    _default = _canon_py

KERNEL = _default.KERNEL_NAME


def canon_encode(n, lranks, down, cf):
    """Canonical (encoding, permutation) of a label-ranked two-relation graph."""
    if _default is _canon_py or n > 64:
        return _canon_py.canon_encode(n, lranks, down, cf)
    return _canonc.canon_encode(n, lranks, down, cf)
