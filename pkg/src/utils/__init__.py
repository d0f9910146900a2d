"""
Utility functions package
"""
from .logger import setup_logger
from .errors import CrosschainError
from .rng import SplitMix64, rng_stream

__all__ = ["setup_logger", "CrosschainError", "SplitMix64", "rng_stream"]
