"""Layered constructions of Yang-Baxter solutions from three-slot operators."""

__version__ = "0.1.0"
