"""Brute-force complex statevector oracle.

Cliffords enter only as gate lists so nothing here touches the tableau code.
Qubit 0 is the most significant tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_STATE_QUBITS = 18
MAX_DENSITY_QUBITS = 10
EIGEN_FLOOR = 1e-14

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)

GATES = {
    "I": _I2,
    "X": _X,
    "Y": _Y,
    "Z": _Z,
    "H": _H,
    "S": _S,
    "SDG": _S.conj().T,
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_GATE_ALIASES = {"CX": "CNOT", "SDAG": "SDG"}


class OracleSizeError(ValueError):
    pass


def gate_matrix(name: str) -> np.ndarray:
    key = name.upper()
    return GATES[_GATE_ALIASES.get(key, key)]


def pauli_matrix(p) -> np.ndarray:
    """Dense ``i**phase * prod_j X_j**x_j Z_j**z_j`` for a PauliOperator-like ``p``."""
    if p.n > 12:
        raise OracleSizeError("pauli_matrix limited to 12 qubits")
    out = np.array([[1.0 + 0j]])
    for j in range(p.n):
        m = _I2
        if (p.x >> j) & 1:
            m = _X
        if (p.z >> j) & 1:
            m = m @ _Z
        out = np.kron(out, m)
    return (1j ** p.phase) * out


def _check_state_size(n: int):
    if n > MAX_STATE_QUBITS:
        raise OracleSizeError(f"dense state limited to {MAX_STATE_QUBITS} qubits, got {n}")


@dataclass
class DenseState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_state_size(self.n)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(2**self.n)

    @classmethod
    def zeros(cls, n: int) -> "DenseState":
        _check_state_size(n)
        amp = np.zeros(2**n, dtype=complex)
        amp[0] = 1.0
        return cls(n, amp)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "DenseState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes.copy())


def apply_matrix(state: DenseState, m: np.ndarray, wires: Sequence[int]) -> DenseState:
    wires = list(wires)
    k = len(wires)
    if m.shape != (2**k, 2**k):
        raise ValueError("matrix size does not match wire count")
    if len(set(wires)) != k or any(not 0 <= w < state.n for w in wires):
        raise ValueError(f"bad wires {wires} for {state.n} qubits")
    psi = state.tensor()
    mt = m.reshape((2,) * (2 * k))
    out = np.tensordot(mt, psi, axes=(list(range(k, 2 * k)), wires))
    out = np.moveaxis(out, list(range(k)), wires)
    return DenseState(state.n, out.reshape(-1))


def apply_gate(state: DenseState, gate: str, wires: Sequence[int], conj: bool = False) -> DenseState:
    m = gate_matrix(gate)
    return apply_matrix(state, m.conj() if conj else m, wires)


def apply_clifford(
    state: DenseState,
    gates: Iterable[tuple[str, Sequence[int]]],
    wires: Sequence[int] | None = None,
    conj: bool = False,
) -> DenseState:
    """Run a gate list; gate qubit ``q`` acts on ``wires[q]``.  ``conj`` runs ``U*``."""
    for name, qs in gates:
        mapped = [wires[q] for q in qs] if wires is not None else list(qs)
        state = apply_gate(state, name, mapped, conj=conj)
    return state


def apply_pauli(state: DenseState, p, wires: Sequence[int] | None = None) -> DenseState:
    """Apply a PauliOperator-like ``p`` qubit-by-qubit (no full matrix)."""
    wires = list(range(p.n)) if wires is None else list(wires)
    for j in range(p.n):
        xb, zb = (p.x >> j) & 1, (p.z >> j) & 1
        if zb:
            state = apply_matrix(state, _Z, [wires[j]])
        if xb:
            state = apply_matrix(state, _X, [wires[j]])
    return DenseState(state.n, state.amplitudes * (1j**p.phase))


def circuit_unitary(gates, n: int, conj: bool = False) -> np.ndarray:
    if n > 10:
        raise OracleSizeError("circuit_unitary limited to 10 qubits")
    cols = []
    for b in range(2**n):
        amp = np.zeros(2**n, dtype=complex)
        amp[b] = 1.0
        cols.append(apply_clifford(DenseState(n, amp), gates, conj=conj).amplitudes)
    return np.array(cols).T


def epr_state(n: int, pairs: Sequence[tuple[int, int]]) -> DenseState:
    """``|EPR>`` on each ``(a, b)`` pair (a sum over |jj>), other qubits ``|0>``."""
    state = DenseState.zeros(n)
    for a, b in pairs:
        state = apply_gate(state, "H", [a])
        state = apply_gate(state, "CNOT", [a, b])
    return state


def epr_vector(k: int) -> np.ndarray:
    """``|EPR>`` between two k-qubit registers laid out as [first | second]."""
    d = 2**k
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def choi_vector(m: np.ndarray) -> np.ndarray:
    """``(M (x) I)|EPR>`` for a d x d operator."""
    d = m.shape[0]
    return (m / np.sqrt(d)).reshape(-1)


def born_probability(state: DenseState, projector: np.ndarray, wires: Sequence[int]) -> float:
    proj = apply_matrix(state, projector, wires)
    return float(np.real(np.vdot(state.amplitudes, proj.amplitudes)))


def project_onto(state: DenseState, vec: np.ndarray, wires: Sequence[int]) -> DenseState:
    """Contract ``<vec|`` on ``wires``; returns the unnormalized rest (wire order kept)."""
    wires = list(wires)
    k = len(wires)
    psi = state.tensor()
    bra = vec.conj().reshape((2,) * k)
    out = np.tensordot(bra, psi, axes=(list(range(k)), wires))
    return DenseState(state.n - k, out.reshape(-1))


def reduced_density(state: DenseState, subset: Sequence[int]) -> np.ndarray:
    """Density matrix on ``subset`` (in the given order), tracing the rest."""
    subset = list(subset)
    if len(subset) > MAX_DENSITY_QUBITS:
        raise OracleSizeError(f"density matrices limited to {MAX_DENSITY_QUBITS} qubits")
    rest = [q for q in range(state.n) if q not in subset]
    psi = np.transpose(state.tensor(), subset + rest).reshape(2 ** len(subset), -1)
    return psi @ psi.conj().T


def von_neumann_entropy(dm: np.ndarray) -> float:
    """Entropy in bits."""
    w = np.linalg.eigvalsh((dm + dm.conj().T) / 2)
    w = w[w > EIGEN_FLOOR]
    return float(-np.sum(w * np.log2(w)))


def renyi2_entropy(dm: np.ndarray) -> float:
    return float(-np.log2(np.real(np.trace(dm @ dm))))


def fidelity(rho_or_state, target) -> float:
    """``<t|rho|t>`` (or ``|<s|t>|^2`` for two vectors)."""
    t = target.amplitudes if isinstance(target, DenseState) else np.asarray(target)
    r = rho_or_state.amplitudes if isinstance(rho_or_state, DenseState) else np.asarray(rho_or_state)
    if r.ndim == 1:
        return float(abs(np.vdot(t, r)) ** 2)
    return float(np.real(np.vdot(t, r @ t)))


def unitary_from_images(x_images, z_images) -> np.ndarray:
    """Rebuild a Clifford matrix (up to global phase) from its Pauli images.

    ``U|0>`` is the joint +1 eigenvector of the Z images; ``U|b>`` follows by
    applying the matching X images.  Independent of the tableau arithmetic.
    """
    n = len(z_images)
    d = 2**n
    proj = np.eye(d, dtype=complex)
    for z in z_images:
        proj = proj @ (np.eye(d) + pauli_matrix(z)) / 2
    # rank-1 projector; take its dominant column
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    v0 = proj[:, col] / np.linalg.norm(proj[:, col])
    xs = [pauli_matrix(x) for x in x_images]
    u = np.zeros((d, d), dtype=complex)
    for b in range(d):
        v = v0
        # |b> = prod_j X_j^{b_j}|0>, qubit 0 most significant
        for j in range(n):
            if (b >> (n - 1 - j)) & 1:
                v = xs[j] @ v
        u[:, b] = v
    return u
