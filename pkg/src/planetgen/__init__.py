"""Deterministic procedural planet generation.

Seeded gradient noise, spline-remapped terrain layers, a restricted
quadtree LOD over a cube-sphere, crack-free tile meshing with a compact
binary wire format, decoration placement and a tile streaming service.
"""

__version__ = "0.1.0"
