"""Exact verification toolkit for coupled Painleve Hamiltonian systems."""
