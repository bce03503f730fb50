"""Quantum-information measures of hyperspherical quantum dots and hydrogen-like ions."""

__version__ = "0.1.0"
