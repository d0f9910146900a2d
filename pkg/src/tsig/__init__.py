"""
Threshold signatures over a transparent group
"""
from .errors import TsigError, InvalidConfig, InsufficientShares, DuplicateIndex, InvalidShareIndex
from .group import Q, G, H, GroupScalar, hash_to_scalar
from .threshold import (
    ThresholdConfig,
    KeyShare,
    KeyShareSet,
    PedersenCommitments,
    SignatureShare,
    ThresholdSignature,
    KeyGenResult,
    dealer_keygen,
    verify_share,
    sign_share,
    combine,
    combine_verified,
    lagrange_at_zero,
    verify,
)

__all__ = [
    # Errors
    "TsigError",
    "InvalidConfig",
    "InsufficientShares",
    "DuplicateIndex",
    "InvalidShareIndex",

    # Group
    "Q",
    "G",
    "H",
    "GroupScalar",
    "hash_to_scalar",

    # Threshold scheme
    "ThresholdConfig",
    "KeyShare",
    "KeyShareSet",
    "PedersenCommitments",
    "SignatureShare",
    "ThresholdSignature",
    "KeyGenResult",
    "dealer_keygen",
    "verify_share",
    "sign_share",
    "combine",
    "combine_verified",
    "lagrange_at_zero",
    "verify",
]
