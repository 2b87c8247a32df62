"""Traces in shadowed bicategories: a term engine plus two concrete models."""

from __future__ import annotations

__version__ = "0.1.0"
