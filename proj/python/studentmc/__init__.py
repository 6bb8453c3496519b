"""Matrix completion with a spectral scaled Student prior.

Thin wrapper around the compiled extension; see the individual functions'
docstrings (``help(studentmc._core)``) and the project README for usage.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
