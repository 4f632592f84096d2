"""Finitely presented quandles, with Thompson's quandle modelled inside Thompson's group F."""

from .core import FiniteQuandle, dihedral_quandle, enumerate_quandles, trivial_quandle
from .laurent import LaurentMatrix, LaurentPoly, describe_module, matrix_reduce
from .pquandle import PElem, ThompsonQuandle, default_model, iso_f
from .terms import Presentation, parse_presentation, parse_term, thompson_presentation
from .thompson import TreePair

__all__ = [
    "FiniteQuandle",
    "LaurentMatrix",
    "LaurentPoly",
    "PElem",
    "Presentation",
    "ThompsonQuandle",
    "TreePair",
    "default_model",
    "describe_module",
    "dihedral_quandle",
    "enumerate_quandles",
    "iso_f",
    "matrix_reduce",
    "parse_presentation",
    "parse_term",
    "thompson_presentation",
    "trivial_quandle",
]
__version__ = "0.1.0"
