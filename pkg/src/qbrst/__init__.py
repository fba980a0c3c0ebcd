"""Exact BRST machinery for quantum Lie algebras."""
