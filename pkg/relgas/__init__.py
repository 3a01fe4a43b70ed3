"""Thermodynamics of ideal relativistic Fermi and Bose gases."""
