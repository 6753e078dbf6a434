"""Shot-aware token compression toolkit (python surface of the C++ core)."""

try:
    from ._shotkit import *  # noqa: F401,F403  (installed package layout)
    from ._shotkit import __doc__ as _core_doc
except ImportError:
    from _shotkit import *  # noqa: F401,F403  (build-tree layout: module on sys.path)
    from _shotkit import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
