"""Exact toolkit for decomposition spaces and their incidence coalgebras."""

__version__ = "0.1.0"
