"""Numerical services: special functions, closed forms, oracle and density matrices."""
