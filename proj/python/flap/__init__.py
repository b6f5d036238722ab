"""Bee-colony operator datasets and their analysis.

Every heavy operation lives in the compiled ``flap._core`` module; this
package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
