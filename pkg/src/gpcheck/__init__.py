"""Finite-field and incidence-geometry checks for point-primitive polygons."""

__version__ = "0.1.0"
