"""Fockbench: Volterra companion operators on Fock spaces."""

__version__ = "0.1.0"
