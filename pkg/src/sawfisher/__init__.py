"""Exact self-avoiding-walk counts and the Fisher triangle substitution."""

__version__ = "0.1.0"
