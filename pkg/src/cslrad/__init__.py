"""Photon emission rates induced by CSL collapse noise, and the resulting bounds on lambda."""

__version__ = "0.1.0"
