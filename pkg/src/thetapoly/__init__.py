"""Exact invariants of link diagrams and θ-curve diagrams."""

__version__ = "0.1.0"
