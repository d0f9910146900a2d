"""
Transparent test-grade group of prime order q = 2^61 - 1

Elements are stored as their discrete logarithms, so the "pairing" collapses to
scalar multiplication. Exact and deterministic, and deliberately insecure.
"""
import hashlib

Q = (1 << 61) - 1

# Fixed public generators
G = 1
H = 2

# Group elements and scalars share one representation
GroupScalar = int


def reduce(value: int) -> GroupScalar:
    return value % Q


def scalar_mul(scalar: int, element: GroupScalar) -> GroupScalar:
    return (scalar * element) % Q


def hash_to_scalar(msg: bytes) -> GroupScalar:
    """SHA-256(msg) read as a big-endian integer, reduced mod q"""
    return int.from_bytes(hashlib.sha256(msg).digest(), "big") % Q


def pairing_check(left_scalar: GroupScalar, left_point: GroupScalar,
                  right_scalar: GroupScalar, right_point: GroupScalar) -> bool:
    """e(a, P) == e(b, R), reduced to products of discrete logs"""
    return scalar_mul(left_scalar, left_point) == scalar_mul(right_scalar, right_point)
