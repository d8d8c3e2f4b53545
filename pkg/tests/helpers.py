"""Dense reference computations driven by gate lists only (never by tableaux)."""

from __future__ import annotations

import numpy as np

from hpclifford import dense
from hpclifford.clifford import from_gates, random_gates
from hpclifford.hp import Partition, build
from hpclifford.pauli import PauliOperator


def gate_instance(n, n_a, n_d, rng, depth=None, d_wires=None):
    """Random circuit, its tableau instance, and the gate list for the oracle."""
    gates = random_gates(n, depth if depth is not None else 6 * n * n + 4, rng)
    inst = build(from_gates(gates, n), Partition.from_sizes(n, n_a, n_d), d_wires)
    return inst, gates


def random_sizes(rng, n_max, n_a_max=2, n_min=2):
    n = int(rng.integers(n_min, n_max + 1))
    n_a = int(rng.integers(1, min(n_a_max, n) + 1))
    n_d = int(rng.integers(1, n + 1))
    return n, n_a, n_d


class DecoderOracle:
    """Statevector of ``[R | U outputs | U* outputs | R-bar]`` built from gates."""

    def __init__(self, inst, gates):
        part = inst.part
        n_a, n = part.n_a, part.n
        self.n_a, self.n, self.n_d = n_a, n, part.n_d
        self.r = list(range(n_a))
        self.system = list(range(n_a, n_a + n))
        self.mirror = list(range(n_a + n, n_a + 2 * n))
        self.r_bar = list(range(n_a + 2 * n, 2 * n_a + 2 * n))
        self.total = 2 * n_a + 2 * n
        self.d = [self.system[w] for w in inst.d_wires]
        self.d_bar = [self.mirror[w] for w in inst.d_wires]
        pairs = list(zip(self.r, self.system[:n_a]))
        pairs += list(zip(self.system[n_a:], self.mirror[n_a:]))
        pairs += list(zip(self.mirror[:n_a], self.r_bar))
        state = dense.epr_state(self.total, pairs)
        state = dense.apply_clifford(state, gates, wires=self.system)
        self.state = dense.apply_clifford(state, gates, wires=self.mirror, conj=True)

    def bell_vector(self, q_d):
        return dense.choi_vector(dense.pauli_matrix(q_d))

    def project_bell(self, q_d, state=None):
        """Unnormalized post-measurement state on the wires outside D D-bar."""
        state = self.state if state is None else state
        return dense.project_onto(state, self.bell_vector(q_d), self.d + self.d_bar)

    def remaining(self):
        gone = set(self.d + self.d_bar)
        return [w for w in range(self.total) if w not in gone]

    def bell_probabilities(self):
        """All ``4**n_d`` Bell outcome probabilities via a basis rotation, keyed by symplectic int."""
        state = self.state
        for a, b in zip(self.d, self.d_bar):
            state = dense.apply_gate(state, "CNOT", [a, b])
            state = dense.apply_gate(state, "H", [a])
        probs = np.abs(state.tensor()) ** 2
        keep = self.d + self.d_bar
        others = tuple(w for w in range(self.total) if w not in keep)
        # axes reordered as `keep`: D wires then D-bar wires
        marg = np.transpose(probs.sum(axis=others) if others else probs,
                            [sorted(keep).index(w) for w in keep])
        out = {}
        n_d = self.n_d
        for idx in np.ndindex(*marg.shape):
            z = sum(idx[j] << j for j in range(n_d))
            x = sum(idx[n_d + j] << j for j in range(n_d))
            out[x | (z << n_d)] = float(marg[idx])
        return out

    def z_probabilities(self):
        """Joint distribution of Z outcomes on D then D-bar, keyed by ``(m, mbar)``."""
        probs = np.abs(self.state.tensor()) ** 2
        keep = self.d + self.d_bar
        others = tuple(w for w in range(self.total) if w not in keep)
        marg = np.transpose(probs.sum(axis=others) if others else probs,
                            [sorted(keep).index(w) for w in keep])
        n_d = self.n_d
        out = {}
        for idx in np.ndindex(*marg.shape):
            m = sum(idx[j] << j for j in range(n_d))
            mb = sum(idx[n_d + j] << j for j in range(n_d))
            out[(m, mb)] = float(marg[idx])
        return out

    def _rr_bar_density(self, state, wires, feedback):
        """Normalize, apply feedback on R-bar and return the density matrix on R R-bar."""
        pos = {w: i for i, w in enumerate(wires)}
        state = dense.DenseState(state.n, state.amplitudes / state.norm)
        if feedback is not None:
            state = dense.apply_pauli(state, feedback, [pos[w] for w in self.r_bar])
        return dense.reduced_density(state, [pos[w] for w in self.r + self.r_bar])

    def bell_outcome(self, q_d, feedback):
        """``(probability, rho on R R-bar)`` after outcome ``q_d`` and feedback Pauli."""
        post = self.project_bell(q_d)
        prob = post.norm**2
        return prob, self._rr_bar_density(post, self.remaining(), feedback)

    def local_outcome(self, m, m_bar, feedback, state=None):
        """``(probability, rho on R R-bar)`` after Z outcomes ``m``/``m_bar``."""
        state = self.state if state is None else state
        n_d = self.n_d
        vec = np.zeros(4**n_d, dtype=complex)
        bits = [(m >> j) & 1 for j in range(n_d)] + [(m_bar >> j) & 1 for j in range(n_d)]
        vec[int("".join(map(str, bits)), 2)] = 1.0
        post = dense.project_onto(state, vec, self.d + self.d_bar)
        prob = post.norm**2
        if prob < 1e-14:
            return prob, None
        return prob, self._rr_bar_density(post, self.remaining(), feedback)

    def epr_fidelity(self, rho):
        return dense.fidelity(rho, dense.epr_vector(self.n_a))


def hp_state(gates, n_a, n):
    """``[R | U outputs | B-bar]`` with R-A and B-Bbar EPR pairs, then U."""
    n_b = n - n_a
    total = n_a + n + n_b
    pairs = [(j, n_a + j) for j in range(n_a)] + [(2 * n_a + i, n_a + n + i) for i in range(n_b)]
    state = dense.epr_state(total, pairs)
    return dense.apply_clifford(state, gates, wires=list(range(n_a, n_a + n)))


def encode(gates, psi, n_a, n):
    """Encoding isometry: ``U`` on ``|psi>_A (x) |EPR>_{B Bbar}`` over ``[U outputs | B-bar]``."""
    n_b = n - n_a
    amp = np.kron(psi, dense.epr_vector(n_b)) if n_b else np.asarray(psi, dtype=complex)
    # kron gives [A | B | Bbar] since epr_vector is laid out [first | second]
    return dense.apply_clifford(dense.DenseState(n + n_b, amp), gates)


def random_state(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def kernel_mixture(kernel, n_a):
    """``(1/N) sum_P |P><P|`` over Choi vectors of the given A Paulis."""
    d2 = 4**n_a
    rho = np.zeros((d2, d2), dtype=complex)
    for v in kernel:
        c = dense.choi_vector(dense.pauli_matrix(PauliOperator.from_symplectic(n_a, v)))
        rho += np.outer(c, c.conj())
    return rho / len(kernel)
