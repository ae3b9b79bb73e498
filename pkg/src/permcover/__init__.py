"""Covering codes in the permutation metric space (S_n, Hamming)."""
from .perm_core import Permutation, PermSet, covering_radius, hamming

__all__ = ["Permutation", "PermSet", "covering_radius", "hamming"]
__version__ = "0.1.0"
