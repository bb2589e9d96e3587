"""Generalized polarization tensors of planar conductivity inclusions and
analytic shape recovery from them."""

from . import conformal, kernels, potential, recover, tensors
from .conformal import ExteriorMap, boundary_frame, catalog
from .potential import Contrast
from .tensors import GptMatrix, fpt_analytic, gpt_forward

__all__ = [
    "conformal",
    "kernels",
    "potential",
    "recover",
    "tensors",
    "ExteriorMap",
    "boundary_frame",
    "catalog",
    "Contrast",
    "GptMatrix",
    "fpt_analytic",
    "gpt_forward",
]

__version__ = "0.1.0"
