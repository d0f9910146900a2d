"""
Scenario configuration schema

Scenarios are JSON documents validated by these pydantic models; every cross
reference (chains, contract addresses, bodies, multichain node members) is checked
when the model is built.
"""
import json
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..contractvm import LIBRARY
from ..txcore import TxType
from ..txcore.builder import DeclaredCall, declared_call
from .errors import ConfigError
from .faults import FaultSpec, parse_fault


class ContractConfig(BaseModel):
    address: int
    body: str
    lockable: bool = True
    name: str = ""
    storage: Dict[int, int] = Field(default_factory=dict)

    @field_validator("body")
    @classmethod
    def body_is_packaged(cls, v: str) -> str:
        if v not in LIBRARY:
            raise ValueError(f"unknown contract body '{v}'; packaged bodies: {LIBRARY.names()}")
        return v


class ChainConfig(BaseModel):
    chain_id: int = Field(ge=0)
    validators: int = Field(default=4, ge=1)
    threshold: int = Field(default=3, ge=1)
    contracts: List[ContractConfig] = Field(default_factory=list)
    rotate_key_at_tick: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_chain(self) -> "ChainConfig":
        if self.threshold > self.validators:
            raise ValueError(f"chain {self.chain_id}: threshold {self.threshold} exceeds {self.validators} validators")
        addresses = [contract.address for contract in self.contracts]
        if len(addresses) != len(set(addresses)):
            raise ValueError(f"chain {self.chain_id}: duplicate contract address")
        return self

    def contract(self, address: int) -> Optional[ContractConfig]:
        return next((c for c in self.contracts if c.address == address), None)


class MultichainNodeConfig(BaseModel):
    """Member validator (by node id) on each chain the multichain node spans"""
    name: str
    account: int
    members: Dict[int, int]


class CallConfig(BaseModel):
    """A hand-written nest element, for nests the construction pass would not produce"""
    tx_type: TxType = TxType.SUBORDINATE
    chain: int
    contract: int
    function: str
    args: List[int] = Field(default_factory=list)
    subordinates: List["CallConfig"] = Field(default_factory=list)

    def to_declared(self) -> DeclaredCall:
        return declared_call(self.tx_type, self.chain, self.contract, self.function, self.args,
                             [sub.to_declared() for sub in self.subordinates])

    def walk(self):
        yield self
        for sub in self.subordinates:
            yield from sub.walk()


CallConfig.model_rebuild()


class TamperConfig(BaseModel):
    """Replace the arguments of the element at a depth-first path; the EOA re-signs"""
    path: List[int]
    args: List[int]


class StorageOverride(BaseModel):
    """Storage the construction pass sees instead of the chain's committed state"""
    chain: int
    contract: int
    storage: Dict[int, int]


class SubmissionConfig(BaseModel):
    label: str
    at_tick: int = Field(default=0, ge=0)
    multichain_node: str
    chain: int
    contract: int
    function: str
    args: List[int] = Field(default_factory=list)
    timeout_blocks: int = Field(default=30, ge=1)
    subordinates: Optional[List[CallConfig]] = None
    tamper: List[TamperConfig] = Field(default_factory=list)
    snapshot_overrides: List[StorageOverride] = Field(default_factory=list)
    expected_status: Optional[str] = None

    def declared_root(self) -> DeclaredCall:
        return declared_call(TxType.ORIGINATING, self.chain, self.contract, self.function, self.args,
                             [sub.to_declared() for sub in self.subordinates or []])


class TimingConfig(BaseModel):
    ticks_per_block: int = Field(default=10, ge=1)
    mining_delay: int = Field(default=2, ge=1)
    timer_jitter: int = Field(default=20, ge=0)
    network_latency: int = Field(default=1, ge=1)
    max_ticks: int = Field(default=5000, ge=1)


class CoordinationConfig(BaseModel):
    chain: int = 100
    contract: int = 0xC00D


class ScenarioConfig(BaseModel):
    name: str
    description: str = ""
    coordination: CoordinationConfig = Field(default_factory=CoordinationConfig)
    timing: TimingConfig = Field(default_factory=TimingConfig)
    chains: List[ChainConfig]
    multichain_nodes: List[MultichainNodeConfig]
    submissions: List[SubmissionConfig] = Field(default_factory=list)
    faults: List[FaultSpec] = Field(default_factory=list)

    @field_validator("faults", mode="before")
    @classmethod
    def parse_fault_strings(cls, v):
        if not isinstance(v, list):
            return v
        return [parse_fault(item) if isinstance(item, str) else item for item in v]

    @model_validator(mode="after")
    def check_references(self) -> "ScenarioConfig":
        chains = {chain.chain_id: chain for chain in self.chains}
        if len(chains) != len(self.chains):
            raise ValueError("duplicate chain id")
        if self.coordination.chain in chains:
            raise ValueError(f"coordination chain {self.coordination.chain} is also a simulated chain")

        def check_contract(chain_id: int, address: int, where: str) -> None:
            chain = chains.get(chain_id)
            if chain is None:
                raise ValueError(f"{where}: unknown chain {chain_id}")
            if chain.contract(address) is None:
                raise ValueError(f"{where}: no contract {address} on chain {chain_id}")

        names = set()
        for node in self.multichain_nodes:
            if node.name in names:
                raise ValueError(f"duplicate multichain node '{node.name}'")
            names.add(node.name)
            for chain_id, node_id in node.members.items():
                if chain_id not in chains:
                    raise ValueError(f"multichain node '{node.name}': unknown chain {chain_id}")
                if not 0 <= node_id < chains[chain_id].validators:
                    raise ValueError(f"multichain node '{node.name}': chain {chain_id} has no validator {node_id}")

        labels = set()
        for sub in self.submissions:
            if sub.label in labels:
                raise ValueError(f"duplicate submission label '{sub.label}'")
            labels.add(sub.label)
            if sub.multichain_node not in names:
                raise ValueError(f"submission '{sub.label}': unknown multichain node '{sub.multichain_node}'")
            check_contract(sub.chain, sub.contract, f"submission '{sub.label}'")
            for call in sub.subordinates or []:
                for element in call.walk():
                    check_contract(element.chain, element.contract, f"submission '{sub.label}'")
            for override in sub.snapshot_overrides:
                check_contract(override.chain, override.contract, f"submission '{sub.label}' override")

        for fault in self.faults:
            if fault.chain is not None and fault.chain not in chains:
                raise ValueError(f"fault {fault.describe()}: unknown chain {fault.chain}")
        return self

    def chain(self, chain_id: int) -> ChainConfig:
        return next(chain for chain in self.chains if chain.chain_id == chain_id)

    def multichain_node(self, name: str) -> MultichainNodeConfig:
        return next(node for node in self.multichain_nodes if node.name == name)

    def submission(self, label: str) -> SubmissionConfig:
        return next(sub for sub in self.submissions if sub.label == label)


def parse_scenario(data: dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid scenario: {e}") from e


def load_scenario_file(path: Union[str, Path]) -> ScenarioConfig:
    """
    Read and validate a scenario JSON file

    Raises:
        ConfigError: unreadable file, malformed JSON or a schema violation
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read scenario {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"scenario {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"scenario {path} must be a JSON object")
    return parse_scenario(data)
