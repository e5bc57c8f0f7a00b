"""Analysis toolkit for nonblocking switching networks.

Subpackages cover d-ary address arithmetic, inverse banyan routing,
multi-plane (multilog) and Clos connection simulators, dynamic weighted
edge coloring, closed-form plane-count bounds, and LP duality
certificates that tie the simulators to the bounds.
"""

__version__ = "0.1.0"
