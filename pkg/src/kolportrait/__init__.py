"""Phase portraits of the cubic Kolmogorov family on the Poincaré disc.

Submodules are imported explicitly, e.g. ``from kolportrait.classify import classify``.
"""

__version__ = "0.1.0"
