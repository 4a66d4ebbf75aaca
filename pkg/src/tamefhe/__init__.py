"""Affine-automorphism homomorphic encryption for straight-line integer programs."""

__version__ = "0.1.0"
