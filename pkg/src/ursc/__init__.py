"""Ultra-resilient superimposed codes: construction, verification and simulators."""

__version__ = "0.1.0"
