"""Elastic scattering in quaternionic quantum mechanics."""

__version__ = "0.1.0"
