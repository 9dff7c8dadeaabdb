"""Pick the special-function core: compiled if it imports, else pure Python."""

from . import _pycore

try:
    from . import _ccore
except ImportError:  # extension not built
    _ccore = None

_CORES = {"python": _pycore}
if _ccore is not None:
    _CORES["compiled"] = _ccore

core = _ccore if _ccore is not None else _pycore


def available():
    """Names of the cores that can be selected."""
    return sorted(_CORES)


def current():
    return "compiled" if core is _ccore and _ccore is not None else "python"


def set_backend(name):
    """Switch the active core ("compiled" or "python"); returns the previous name."""
    global core
    if name not in _CORES:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available()}")
    prev = current()
    core = _CORES[name]
    return prev
