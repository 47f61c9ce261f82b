"""Apollonian packings, Hecke-group spectra and Neumann-cut gap checks."""

__version__ = "0.1.0"
