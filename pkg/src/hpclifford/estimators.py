"""scikit-learn style decoders: ``fit`` on a Clifford, ``predict`` feedback from outcome bits.

Outcome rows are bit arrays.  For the Bell decoder a row is the symplectic
vector of the measured D Pauli (x bits then z bits, length ``2*n_d``); for the
local decoder it is ``m`` followed by ``mbar`` (length ``2*n_d``).  Predicted
rows are the symplectic vector of the feedback Pauli on R-bar (length
``2*n_a``).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bell import FeedbackTable, ProtocolViolation
from .clifford import CliffordTableau, from_gates
from .hp import HpInstance, Partition, build
from .pauli import array_to_bits, bits_to_array


def _as_tableau(u, n: int | None = None) -> CliffordTableau:
    if isinstance(u, CliffordTableau):
        return u
    gates = list(u)
    if n is None:
        n = 1 + max(q for _, qs in gates for q in qs)
    return from_gates(gates, n)


def _check_bits(X, width: int) -> np.ndarray:
    X = check_array(X, dtype=np.int64, ensure_min_samples=1)
    if X.shape[1] != width:
        raise ValueError(f"expected {width} outcome bits per row, got {X.shape[1]}")
    if np.any((X != 0) & (X != 1)):
        raise ValueError("outcome rows must contain only 0/1 bits")
    return X


class _DecoderBase(BaseEstimator):
    def __init__(self, n_a: int = 1, n_d: int = 1, d_wires=None):
        self.n_a = n_a
        self.n_d = n_d
        self.d_wires = d_wires

    def _build(self, u, n: int | None) -> HpInstance:
        u = _as_tableau(u, n)
        part = Partition.from_sizes(u.n, self.n_a, self.n_d)
        return build(u, part, self.d_wires)

    def fit(self, X, y=None, n: int | None = None):
        """``X`` is a CliffordTableau or a gate list; ``y`` is ignored."""
        self.instance_ = self._build(X, n)
        self._fit_tables()
        return self


class BellRecoveryDecoder(_DecoderBase):
    """Maps generalized-Bell outcomes on D to the feedback Pauli on R-bar."""

    def _fit_tables(self):
        inst = self.instance_
        self.feedback_table_ = FeedbackTable.for_instance(inst)
        self.kernel_dim_ = inst.kernel_dim
        self.recoverable_ = self.kernel_dim_ == 0

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "instance_")
        X = _check_bits(X, 2 * self.n_d)
        out = np.empty((X.shape[0], 2 * self.n_a), dtype=np.int64)
        for i, row in enumerate(X):
            p = self.feedback_table_.lookup(array_to_bits(row))
            out[i] = bits_to_array(p, 2 * self.n_a)
        return out

    def score(self, X=None, y=None) -> float:
        """EPR fidelity achieved after feedback; independent of the outcome."""
        check_is_fitted(self, "instance_")
        return 1.0 / (1 << self.kernel_dim_)


class LocalRecoveryDecoder(_DecoderBase):
    """Maps local Z outcomes ``(m, mbar)`` to feedback; flags syndromes outside the image."""

    def _fit_tables(self):
        inst = self.instance_
        self.feedback_table_ = FeedbackTable.for_local(inst)
        self.kernel_dim_ = inst.kernel_dim_local
        self.recoverable_ = self.kernel_dim_ == 0

    def _syndromes(self, X) -> list[int]:
        X = _check_bits(X, 2 * self.n_d)
        return [array_to_bits(row[: self.n_d]) ^ array_to_bits(row[self.n_d:]) for row in X]

    def detect(self, X) -> np.ndarray:
        check_is_fitted(self, "instance_")
        return np.array([self.feedback_table_.get(s) is None for s in self._syndromes(X)])

    def predict(self, X, strict: bool = False) -> np.ndarray:
        """Feedback rows; rows with a detected error are filled with -1 (or raise if ``strict``)."""
        check_is_fitted(self, "instance_")
        syndromes = self._syndromes(X)
        out = np.full((len(syndromes), 2 * self.n_a), -1, dtype=np.int64)
        for i, s in enumerate(syndromes):
            p = self.feedback_table_.get(s)
            if p is None:
                if strict:
                    raise ProtocolViolation(f"syndrome {s:#x} is not in the image")
                continue
            out[i] = bits_to_array(p, 2 * self.n_a)
        return out

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "instance_")
        return 1.0 / (1 << self.kernel_dim_)
