"""Exact computer algebra for quantized enveloping algebras at roots of unity
and the Poisson geometry of Manin triples."""

__version__ = "0.1.0"
