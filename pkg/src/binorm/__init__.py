"""Exact computation and certification of bi-invariant word norms on groups."""
