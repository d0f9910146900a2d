"""
Simulator errors
"""
from ..utils.errors import CrosschainError


class SimulationError(CrosschainError):
    """Base class for simulator failures"""


class ConfigError(SimulationError):
    """Scenario or fault configuration is invalid, or the run is outside the protocol's assumptions"""


class UnknownSite(SimulationError):
    """A fault names a chain or validator that is not in the topology"""


class TraceFormatError(SimulationError):
    """A stored trace or final state file cannot be parsed"""
