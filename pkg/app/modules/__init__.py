"""Algebra modules: polynomials, linear algebra, resultants, towers and the rectifier."""
