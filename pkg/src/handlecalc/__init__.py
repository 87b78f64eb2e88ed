"""Exact handle calculus for 4-manifolds."""
