"""Exact computations with the Schrödinger-Virasoro algebra and its Whittaker modules."""
from .lie import (
    Generator,
    HalfInteger,
    LieElement,
    L,
    M,
    Y,
    bracket,
    bracket_gen,
    gen_weight,
    parse_generator,
)

__all__ = [
    "Generator",
    "HalfInteger",
    "LieElement",
    "L",
    "M",
    "Y",
    "bracket",
    "bracket_gen",
    "gen_weight",
    "parse_generator",
]
