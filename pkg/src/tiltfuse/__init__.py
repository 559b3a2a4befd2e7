"""Exact fusion combinatorics and tensor-power growth for SL2 tilting modules."""
from __future__ import annotations

__version__ = "0.1.0"
