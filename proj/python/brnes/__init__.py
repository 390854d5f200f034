"""BRNES experience-sharing simulator: python bindings over the C++ core."""

try:
    from ._brnes import *  # noqa: F401,F403
    from ._brnes import __version__  # noqa: F401
except ImportError:  # build-tree layout keeps the extension next to the package
    from _brnes import *  # noqa: F401,F403
    from _brnes import __version__  # noqa: F401
