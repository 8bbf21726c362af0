"""Utility modules for latticefactor."""
