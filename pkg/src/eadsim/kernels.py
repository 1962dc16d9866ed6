"""Kernel selection: the compiled extension when importable, else numpy.

Set ``EADSIM_PURE=1`` to force the numpy implementations.
"""

import os

from . import _fallback

compiled = None
if not os.environ.get("EADSIM_PURE"):
    try:
        from . import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else _fallback

BACKEND = "compiled" if compiled is not None else "python"

jacobi_eigh = _impl.jacobi_eigh
separable_objective = _impl.separable_objective
mix_product_states = _impl.mix_product_states

__all__ = ["BACKEND", "jacobi_eigh", "separable_objective", "mix_product_states"]
