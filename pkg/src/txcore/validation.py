"""
Cross-field consistency rules for nested crosschain transactions
"""
import enum
from dataclasses import dataclass
from typing import List, Optional

from .types import SHARED_FIELDS, CrosschainTransaction, TxPath, TxType


class ViolationKind(str, enum.Enum):
    FIELD_MISMATCH = "FieldMismatch"
    FROM_CHAIN_MISMATCH = "FromChainMismatch"
    FROM_ADDRESS_MISMATCH = "FromAddressMismatch"
    ORIGINATING_NOT_ROOT = "OriginatingNotRoot"
    NON_VIEW_UNDER_VIEW = "NonViewUnderView"
    SIGNALLING_WITH_SUBORDINATES = "SignallingWithSubordinates"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    path: TxPath
    field: Optional[str] = None
    detail: str = ""

    def __str__(self) -> str:
        label = f"{self.kind.value}({self.field})" if self.field else self.kind.value
        return f"{label} at {list(self.path)}"


def validate_nesting(tx: CrosschainTransaction) -> List[Violation]:
    """Every consistency violation in the nest, in depth-first order; empty when valid"""
    violations: List[Violation] = []

    for path, element in tx.walk():
        # Shared fields are compared against the root
        if path:
            for name in SHARED_FIELDS:
                if getattr(element, name) != getattr(tx, name):
                    violations.append(Violation(
                        ViolationKind.FIELD_MISMATCH, path, name,
                        f"{getattr(element, name)} != root {getattr(tx, name)}",
                    ))
            if element.tx_type == TxType.ORIGINATING:
                violations.append(Violation(ViolationKind.ORIGINATING_NOT_ROOT, path))

        if element.tx_type == TxType.SIGNALLING and element.subordinates:
            violations.append(Violation(ViolationKind.SIGNALLING_WITH_SUBORDINATES, path))

        for i, sub in enumerate(element.subordinates):
            sub_path = path + (i,)
            if sub.from_chain != element.chain_id:
                violations.append(Violation(
                    ViolationKind.FROM_CHAIN_MISMATCH, sub_path, "from_chain",
                    f"{sub.from_chain} != parent chain {element.chain_id}",
                ))
            if sub.from_address != element.to:
                violations.append(Violation(
                    ViolationKind.FROM_ADDRESS_MISMATCH, sub_path, "from_address",
                    f"{sub.from_address} != parent to {element.to}",
                ))
            if element.is_view and not sub.is_view:
                violations.append(Violation(ViolationKind.NON_VIEW_UNDER_VIEW, sub_path))

    return violations
