"""Exact-arithmetic verification suite for local identities on GSp(4)."""

__version__ = "0.1.0"
