"""Iterated triangulations, 2-edge-colorings and monochromatic subgraphs."""

__version__ = "0.1.0"
