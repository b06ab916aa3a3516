"""Numeric core: tensor kernels (compiled or NumPy, chosen at import),
layer forward/backward pairs, and the Adam optimizer."""

from .backend import backend_name, COMPILED
from .adam import Adam
from . import layers

__all__ = ["backend_name", "COMPILED", "Adam", "layers"]
