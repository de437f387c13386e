"""Tube geometry and complex-length certificates for short geodesics in hyperbolic 3-manifolds."""

__version__ = "0.1.0"
