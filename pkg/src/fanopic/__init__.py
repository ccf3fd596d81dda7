"""Exact verification toolkit for Picard-group automorphism data of Fano threefolds."""

__version__ = "0.1.0"
