"""Kernel backend selection: compiled extension if built, Python otherwise.

``permanent`` and ``lift_blocks`` are rebindable module attributes so the
benchmark and the test suite can force a specific backend via
:func:`force_backend`.
"""

from . import _kernels_py

try:
    from . import _kernels as _default
except ImportError:
    _default = _kernels_py

BACKEND = _default.BACKEND_NAME
MAX_PERMANENT_SIZE = _default.MAX_PERMANENT_SIZE

permanent = _default.permanent
lift_blocks = _default.lift_blocks


def available_backends() -> dict:
    """Name -> kernel module, for everything importable on this build."""
    out = {_kernels_py.BACKEND_NAME: _kernels_py}
    if _default is not _kernels_py:
        out[_default.BACKEND_NAME] = _default
    return out


def force_backend(name: str):
    """Rebind the module-level kernels to the named backend.

    Testing/benchmark hook; returns the previously active backend name.
    """
    global permanent, lift_blocks, BACKEND
    mod = available_backends().get(name)
    if mod is None:
        raise ValueError(f"backend {name!r} not available on this build")
    previous = BACKEND
    permanent = mod.permanent
    lift_blocks = mod.lift_blocks
    BACKEND = name
    return previous
