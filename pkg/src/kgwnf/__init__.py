"""Hamiltonian normal forms of the Klein-Gordon-Wave system and the numerics to test them."""

__version__ = "0.1.0"
