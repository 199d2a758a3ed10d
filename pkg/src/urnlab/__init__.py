"""Exact verification toolkit for competing-urns correlation properties."""

__version__ = "0.1.0"
