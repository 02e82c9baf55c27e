"""Exact intersection cohomology of stratified simplicial complexes."""

__version__ = "0.1.0"
