"""Ruelle-Bowen random walks on strongly connected directed graphs.

Thin wrapper over the compiled extension; see the project README for the
mathematical background and the CLI.
"""

try:
    from ._rbwalk import *  # noqa: F401,F403
    from ._rbwalk import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _rbwalk import *  # noqa: F401,F403
    from _rbwalk import __version__  # noqa: F401
