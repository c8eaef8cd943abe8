"""Relative train tracks, CTs and fixed subgroups for free group automorphisms."""
