"""eh-vortices: vortex lines of Euler-Heisenberg corrected electromagnetic fields."""

__version__ = "0.1.0"
