"""Stratification data, glued Kahler potentials and curvature certificates
for quotient singularities C^m/G with finite G < U(m)."""

__version__ = "0.1.0"
