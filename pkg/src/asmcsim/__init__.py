"""Adaptive sliding-mode trajectory tracking simulator for a two-link arm."""

__version__ = "0.1.0"
