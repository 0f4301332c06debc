"""Computational laboratory for comparative prime counting.

Everything lives in the compiled extension; this package just re-exports it.
"""

from ._prlab import *  # noqa: F401,F403
from ._prlab import __doc__  # noqa: F401
