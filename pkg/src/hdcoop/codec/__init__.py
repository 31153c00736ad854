"""Bit-exact coding schemes on the deterministic models.

Submodules: ``geometry`` (mode-A layout and zero forcing), ``code`` (linear
superposition codes, encoding, decoding), ``alloc`` (rate allocations and
schedules) and ``sim`` (block simulation of the half-duplex schemes).  Their
public names are re-exported here on first access.
"""

from importlib import import_module

_SUBMODULES = ("geometry", "code", "alloc", "sim")


def __getattr__(name):
    for sub in _SUBMODULES:
        mod = import_module(f"{__name__}.{sub}")
        if name in getattr(mod, "__all__", ()):
            return getattr(mod, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    names = []
    for sub in _SUBMODULES:
        names += list(getattr(import_module(f"{__name__}.{sub}"), "__all__", ()))
    return sorted(set(names) | set(_SUBMODULES))
