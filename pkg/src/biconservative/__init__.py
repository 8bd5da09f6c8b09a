"""Complete non-CMC biconservative surfaces in hyperbolic 3-space.

The package builds the three explicit surface families (indexed by the
sign of a single real constant), glues their profile curves into complete
surfaces, constructs the matching intrinsic metric family, and audits
every closed-form identity with an independent finite-difference engine.
"""

__version__ = "0.1.0"

from . import errors, models, numerics  # noqa: F401
