"""Generalized quantum groups, their root systems, Shapovalov forms and centers."""
