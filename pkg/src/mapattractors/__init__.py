"""Attractors of piecewise-linear maps and their continuation."""
