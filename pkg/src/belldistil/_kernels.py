"""Kernel selection: compiled trajectory loop if available, else pure Python."""

try:
    from . import _trajectory_cy as _impl
except ImportError:  # extension not built; the fallback is fully equivalent
    from . import _trajectory_py as _impl

simulate = _impl.simulate
IMPL = _impl.IMPL
