"""Epidemic-model analysis of information spreading on social media."""

__version__ = "0.1.0"
