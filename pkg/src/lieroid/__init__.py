"""Exact tensor calculus on Lie algebroids."""
