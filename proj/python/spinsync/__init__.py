"""Two detuned spins in a shared thermal bath.

Redfield dynamics, the commuting-coupling dephasing channel, synchronization
analytics and quantum/classical correlation measures, bound from the C++ core.
"""

from ._spinsync import *  # noqa: F401,F403
from ._spinsync import __version__  # noqa: F401
