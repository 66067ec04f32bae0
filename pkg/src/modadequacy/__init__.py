"""Adequacy and weak adequacy of finite-group modules in positive characteristic."""

__version__ = "0.1.0"
