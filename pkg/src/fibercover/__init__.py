"""Branched covers of the plane, their fiber products, ends, canonical products and path lifting."""

__version__ = "0.1.0"
