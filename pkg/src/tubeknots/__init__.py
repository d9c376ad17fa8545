"""Knotted polygons in the 2x1 lattice tube.

Enumeration, transfer matrices, 4-plat diagram calculus and lattice surgery.
"""

__version__ = "0.1.0"
