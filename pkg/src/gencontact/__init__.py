"""Exact symbolic checks for generalized contact structures on line bundles."""

__version__ = "0.1.0"
