"""Discrete planar Yang-Mills holonomy fields over finite groups and the circle."""

__version__ = "0.1.0"
