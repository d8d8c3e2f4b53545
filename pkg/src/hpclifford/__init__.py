"""Deterministic recovery of information thrown into Clifford scramblers."""

from .clifford import CliffordTableau, from_gates, random_clifford
from .estimators import BellRecoveryDecoder, LocalRecoveryDecoder
from .hp import HpInstance, Partition, build, is_locally_recoverable, is_perfectly_recoverable
from .pauli import PauliOperator

__version__ = "0.1.0"

__all__ = [
    "BellRecoveryDecoder",
    "CliffordTableau",
    "HpInstance",
    "LocalRecoveryDecoder",
    "Partition",
    "PauliOperator",
    "build",
    "from_gates",
    "is_locally_recoverable",
    "is_perfectly_recoverable",
    "random_clifford",
]
