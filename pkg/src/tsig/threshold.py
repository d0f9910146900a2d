"""
M-of-N threshold signatures with Pedersen verifiable secret sharing
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from ..utils.rng import rng_stream
from .errors import DuplicateIndex, InsufficientShares, InvalidConfig, InvalidShareIndex
from .group import G, H, Q, GroupScalar, hash_to_scalar, pairing_check, reduce


@dataclass(frozen=True)
class ThresholdConfig:
    """n validator key shares, any m of which can sign"""
    n: int
    m: int

    def validate(self) -> None:
        if self.n < 1 or self.m < 1 or self.m > self.n:
            raise InvalidConfig(f"threshold m={self.m} invalid for n={self.n}")


@dataclass(frozen=True)
class KeyShare:
    index: int
    secret_share: GroupScalar
    blinding_share: GroupScalar


@dataclass(frozen=True)
class PedersenCommitments:
    """Entry j commits to coefficient pair (a_j, b_j) as a_j*G + b_j*H"""
    commitments: Tuple[GroupScalar, ...]


@dataclass(frozen=True)
class SignatureShare:
    index: int
    value: GroupScalar


@dataclass(frozen=True)
class ThresholdSignature:
    value: GroupScalar


KeyShareSet = Tuple[KeyShare, ...]


class KeyGenResult(NamedTuple):
    public_key: GroupScalar
    shares: KeyShareSet
    commitments: PedersenCommitments
    dealer_secret: GroupScalar


def _eval_poly(coefficients: Sequence[int], x: int) -> int:
    # Horner, highest degree first
    result = 0
    for coefficient in reversed(coefficients):
        result = (result * x + coefficient) % Q
    return result


def dealer_keygen(cfg: ThresholdConfig, seed: int) -> KeyGenResult:
    """
    Trusted-dealer key generation

    Samples f (secret polynomial) then g (blinding polynomial), both of degree m-1,
    from the same seeded stream. dealer_secret = f(0) is returned for test oracles only.
    """
    cfg.validate()
    stream = rng_stream(seed, "tsig/dealer")
    f = [stream.next_u64() % Q for _ in range(cfg.m)]
    g = [stream.next_u64() % Q for _ in range(cfg.m)]

    commitments = PedersenCommitments(tuple(
        reduce(a * G + b * H) for a, b in zip(f, g)
    ))
    shares = tuple(
        KeyShare(index=i, secret_share=_eval_poly(f, i), blinding_share=_eval_poly(g, i))
        for i in range(1, cfg.n + 1)
    )
    secret = f[0]
    return KeyGenResult(
        public_key=reduce(secret * G),
        shares=shares,
        commitments=commitments,
        dealer_secret=secret,
    )


def verify_share(share: KeyShare, commitments: PedersenCommitments) -> bool:
    """True iff s*G + b*H equals sum_j index^j * C_j"""
    if share.index <= 0:
        return False
    left = reduce(share.secret_share * G + share.blinding_share * H)
    right = 0
    power = 1
    for commitment in commitments.commitments:
        right = (right + power * commitment) % Q
        power = (power * share.index) % Q
    return left == right


def sign_share(share: KeyShare, msg: bytes) -> SignatureShare:
    return SignatureShare(index=share.index, value=(share.secret_share * hash_to_scalar(msg)) % Q)


def lagrange_at_zero(indices: Sequence[int]) -> List[int]:
    """Lagrange coefficients for interpolation at x = 0 over the given points"""
    coefficients = []
    for i in indices:
        numerator, denominator = 1, 1
        for j in indices:
            if j == i:
                continue
            numerator = (numerator * j) % Q
            denominator = (denominator * (j - i)) % Q
        coefficients.append((numerator * pow(denominator, -1, Q)) % Q)
    return coefficients


def combine(shares: Sequence[SignatureShare], cfg: ThresholdConfig) -> ThresholdSignature:
    """Interpolate the signature at zero from at least m distinct shares"""
    indices = [share.index for share in shares]
    if len(set(indices)) != len(indices):
        raise DuplicateIndex(f"duplicate share index in {sorted(indices)}")
    if len(shares) < cfg.m:
        raise InsufficientShares(f"need {cfg.m} shares, got {len(shares)}")
    for index in indices:
        if index <= 0 or index % Q == 0:
            raise InvalidShareIndex(f"share index {index} is not a valid evaluation point")

    lambdas = lagrange_at_zero(indices)
    value = sum(lam * share.value for lam, share in zip(lambdas, shares)) % Q
    return ThresholdSignature(value=value)


def verify(public_key: GroupScalar, msg: bytes, sig: ThresholdSignature) -> bool:
    """Transparent pairing check e(sig, G) == e(H(msg), pk)"""
    return pairing_check(sig.value, G, hash_to_scalar(msg), public_key)


def combine_verified(shares: Iterable[SignatureShare], cfg: ThresholdConfig,
                     public_key: GroupScalar, msg: bytes) -> Optional[ThresholdSignature]:
    """
    First m-subset (in index order) whose combination verifies, or None

    Filters corrupted shares without per-share verification keys.
    """
    unique = {}
    for share in shares:
        unique.setdefault(share.index, share)
    ordered = [unique[index] for index in sorted(unique)]
    if len(ordered) < cfg.m:
        return None
    for subset in combinations(ordered, cfg.m):
        candidate = combine(subset, cfg)
        if verify(public_key, msg, candidate):
            return candidate
    return None
