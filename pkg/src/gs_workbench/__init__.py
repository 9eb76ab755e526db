"""Exact-arithmetic workbench for Gerstenhaber-Schack cohomology of Hopf algebras."""
