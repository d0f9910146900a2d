"""
Root of the domain exception hierarchy
"""


class CrosschainError(Exception):
    """Base class for every error raised by the simulator packages"""
