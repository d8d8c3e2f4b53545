"""Commutator-sign matrices, commutator wavefunctions and Wigner operators.

Exact checks use integer sign sums; the Wigner side is built from dense
matrices so the two routes share nothing beyond the Pauli enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import choi_vector, pauli_matrix
from .pauli import PauliOperator, all_paulis, commutator_sign

MAX_EXACT_QUBITS = 4
MAX_DENSE_QUBITS = 3


def _require(n: int, cap: int):
    if not 1 <= n <= cap:
        raise ValueError(f"n must lie in 1..{cap}, got {n}")


def sign_matrix(n: int) -> np.ndarray:
    """``F[P, Q] = <P Q P^+ Q^+>`` by explicit commutator signs (symplectic-int order)."""
    paulis = list(all_paulis(n))
    return np.array([[commutator_sign(p, q) for q in paulis] for p in paulis], dtype=np.int64)


def f_matrix_inversion_check(n: int) -> bool:
    """True iff ``sum_Q F[P, Q] F[Q, R] == d**2 delta(P, R)`` for every ``P, R``."""
    _require(n, MAX_EXACT_QUBITS)
    f = sign_matrix(n)
    return bool(np.array_equal(f @ f, 4**n * np.eye(4**n, dtype=np.int64)))


def f_matrix_is_symmetric(n: int) -> bool:
    _require(n, MAX_EXACT_QUBITS)
    f = sign_matrix(n)
    return bool(np.array_equal(f, f.T))


@dataclass(frozen=True)
class CommutatorWavefunction:
    """Amplitudes ``<T_u Q T_u^+ Q^+> / d`` on the Choi basis ``|Q>``."""

    u_label: PauliOperator
    coefficients: dict[str, float]

    @classmethod
    def build(cls, t_u: PauliOperator) -> "CommutatorWavefunction":
        d = 2**t_u.n
        coeffs = {q.to_label(): commutator_sign(t_u, q) / d for q in all_paulis(t_u.n)}
        return cls(t_u, coeffs)

    def norm(self) -> float:
        return float(np.sqrt(sum(c * c for c in self.coefficients.values())))

    def overlap(self, other: "CommutatorWavefunction") -> float:
        return sum(c * other.coefficients[k] for k, c in self.coefficients.items())

    def dense_vector(self) -> np.ndarray:
        """``sum_Q c_Q (Q (x) I)|EPR>`` as a ``d**2`` vector."""
        out = 0
        for label, c in self.coefficients.items():
            out = out + c * choi_vector(pauli_matrix(PauliOperator.from_label(label)))
        return out


@dataclass(frozen=True)
class WignerOperator:
    """``W_u = (1/d) sum_Q T_u Q T_u^+`` as a dense matrix."""

    u_label: PauliOperator
    dense_matrix: np.ndarray

    @classmethod
    def build(cls, t_u: PauliOperator) -> "WignerOperator":
        d = 2**t_u.n
        t = pauli_matrix(t_u)
        acc = np.zeros((d, d), dtype=complex)
        for q in all_paulis(t_u.n):
            acc += t @ pauli_matrix(q) @ t.conj().T
        return cls(t_u, acc / d)

    def choi(self) -> np.ndarray:
        return choi_vector(self.dense_matrix)

    def overlap(self, other: "WignerOperator") -> complex:
        """``<W_u|W_v> = Tr(W_u^+ W_v) / d``."""
        d = self.dense_matrix.shape[0]
        return complex(np.trace(self.dense_matrix.conj().T @ other.dense_matrix) / d)


def wigner_operators(n: int) -> list[WignerOperator]:
    _require(n, MAX_DENSE_QUBITS)
    return [WignerOperator.build(t) for t in all_paulis(n)]


def wigner_orthonormality_check(n: int) -> float:
    """Max ``|<W_u|W_v> - delta(u, v)|`` over all pairs."""
    ws = wigner_operators(n)
    mats = np.array([w.dense_matrix for w in ws])
    d = 2**n
    gram = np.einsum("uij,vij->uv", mats.conj(), mats) / d
    return float(np.max(np.abs(gram - np.eye(len(ws)))))


def commutator_wavefunction_equals_wigner_choi(n: int) -> float:
    """Max ``|| |psi_u> - (W_u (x) I)|EPR> ||`` over all ``T_u``."""
    _require(n, MAX_DENSE_QUBITS)
    worst = 0.0
    for t in all_paulis(n):
        psi = CommutatorWavefunction.build(t).dense_vector()
        worst = max(worst, float(np.linalg.norm(psi - WignerOperator.build(t).choi())))
    return worst


def commutator_wavefunction_gram_deviation(n: int) -> float:
    """Max ``|<psi_u|psi_v> - delta(u, v)|`` from the sign sums alone."""
    _require(n, MAX_DENSE_QUBITS)
    psis = [CommutatorWavefunction.build(t) for t in all_paulis(n)]
    worst = 0.0
    for i, a in enumerate(psis):
        for j, b in enumerate(psis):
            worst = max(worst, abs(a.overlap(b) - (i == j)))
    return worst


def proof_chain_deviation(n: int) -> float:
    """Disagreement between the sign-sum Gram matrix and the dense Wigner Gram matrix."""
    _require(n, MAX_DENSE_QUBITS)
    ts = list(all_paulis(n))
    psis = [CommutatorWavefunction.build(t) for t in ts]
    ws = [WignerOperator.build(t) for t in ts]
    worst = 0.0
    for i in range(len(ts)):
        for j in range(len(ts)):
            worst = max(worst, abs(psis[i].overlap(psis[j]) - ws[i].overlap(ws[j])))
    return worst


@dataclass(frozen=True)
class AppendixRow:
    name: str
    passed: bool
    deviation: float


def verify_appendix(n: int, tol: float = 1e-12) -> list[AppendixRow]:
    inversion = f_matrix_inversion_check(n)
    orth = wigner_orthonormality_check(n)
    choi = commutator_wavefunction_equals_wigner_choi(n)
    return [
        AppendixRow("f_matrix_inversion", inversion, 0.0 if inversion else 1.0),
        AppendixRow("wigner_orthonormality", orth < tol, orth),
        AppendixRow("commutator_wavefunction_is_wigner_choi", choi < tol, choi),
    ]
