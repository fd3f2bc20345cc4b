"""Computational checks for power quotients of surface groups."""

__version__ = "0.1.0"
