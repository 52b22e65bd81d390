"""Exact verification engine for twisted Poisson geometry and its quantization."""

__version__ = "0.1.0"
