"""Tessellations of hyperbolic 3-space by cusped regular polyhedra with torus cusps."""

__version__ = "0.1.0"
