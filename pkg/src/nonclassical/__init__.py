"""Nonclassicality measures for single-qubit states of light."""
