"""Variational jets, monodromies and integrability obstructions along complex-time paths."""
from .kernels import BACKEND

__all__ = ["BACKEND", "__version__"]

__version__ = "0.1.0"
