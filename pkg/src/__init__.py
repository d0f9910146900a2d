"""
Main package initialization
"""
__version__ = "1.0.0"
__author__ = "Atomic Crosschain Transaction Simulator"
__description__ = "Deterministic simulator and protocol library for atomic crosschain transactions"
