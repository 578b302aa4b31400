"""Field algebra, exact polynomials, shared models and file formats."""
