"""Three-mode parametric entanglement toolkit.

Everything lives in the compiled extension; this package just re-exports it.
"""

from trimode._core import *  # noqa: F401,F403
from trimode._core import __doc__  # noqa: F401

__version__ = "0.1.0"
