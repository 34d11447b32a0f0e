"""Deciding which point counts are possible for curves over small finite fields."""

__version__ = "0.1.0"
