"""Time-optimal descent on the unit disk under inverse-square gravity.

Subpackages solve the smooth and through-origin curve families, the
obstacle-constrained annulus families, a discrete shortest-time oracle,
and value-function grids, with a CLI and HTTP service on top.
"""

__version__ = "0.1.0"
