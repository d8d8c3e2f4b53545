"""Pure stabilizer states given by n commuting, independent Pauli generators."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .clifford import CliffordTableau, complex_conjugate, conjugate_on
from .gf2 import RowSpan, rank_of_rows
from .hp import HpInstance, Partition
from .pauli import PauliOperator, commutator_sign, multiply, symplectic_product


class StabilizerState:
    """Each generator ``g`` (phase included) satisfies ``g|psi> = |psi>``.

    Measurements mutate the state in place.
    """

    def __init__(self, n: int, generators: Iterable[PauliOperator], check: bool = True):
        self.n = n
        self.generators = list(generators)
        self._span = None
        if check:
            self.validate()

    def validate(self):
        gens = self.generators
        if len(gens) != self.n:
            raise ValueError(f"need {self.n} generators, got {len(gens)}")
        for g in gens:
            if g.n != self.n:
                raise ValueError("generator on wrong register size")
            if not g.is_hermitian():
                raise ValueError(f"generator {g} is not Hermitian")
        for i, g in enumerate(gens):
            for h in gens[i + 1:]:
                if symplectic_product(g, h):
                    raise ValueError("generators do not commute")
        if rank_of_rows(g.symplectic for g in gens) != self.n:
            raise ValueError("generators are not independent")

    @classmethod
    def zero(cls, n: int) -> "StabilizerState":
        return cls(n, [PauliOperator.single(n, j, "Z") for j in range(n)], check=False)

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "StabilizerState":
        gens = [PauliOperator.from_label(s) for s in labels]
        return cls(gens[0].n if gens else 0, gens)

    def copy(self) -> "StabilizerState":
        out = StabilizerState(self.n, self.generators, check=False)
        out._span = self._span
        return out

    def to_json(self) -> list[str]:
        return [g.to_label() for g in self.generators]

    def _invalidate(self):
        self._span = None

    def _group_span(self) -> RowSpan:
        if self._span is None:
            self._span = RowSpan(g.symplectic for g in self.generators)
        return self._span

    # evolution ------------------------------------------------------------

    def apply_clifford(self, u: CliffordTableau, wires: Sequence[int]):
        self.generators = [conjugate_on(u, g, wires) for g in self.generators]
        self._invalidate()

    def apply_pauli(self, p: PauliOperator):
        """Apply a Pauli unitary: generators anticommuting with it flip sign."""
        self.generators = [
            g if commutator_sign(g, p) == 1 else -g for g in self.generators
        ]

    # measurement ----------------------------------------------------------

    def stabilizer_sign(self, p: PauliOperator) -> int | None:
        """+1/-1 if ``+-p`` is in the stabilizer group, None otherwise."""
        tag = self._group_span().decompose(p.symplectic)
        if tag is None:
            return None
        if any(symplectic_product(g, p) for g in self.generators):
            return None
        acc = PauliOperator(self.n)
        for i, g in enumerate(self.generators):
            if (tag >> i) & 1:
                acc = multiply(acc, g)
        diff = (p.phase - acc.phase) % 4
        if diff % 2:
            raise ValueError(f"{p} is not Hermitian")
        return 1 if diff == 0 else -1

    def expectation(self, p: PauliOperator) -> int:
        """``<p>`` for a Hermitian Pauli: +1, -1 or 0."""
        if not p.is_hermitian():
            raise ValueError(f"{p} is not Hermitian")
        if any(symplectic_product(g, p) for g in self.generators):
            return 0
        return self.stabilizer_sign(p)

    def measure(self, p: PauliOperator, rng: np.random.Generator | None = None,
                force: int | None = None) -> tuple[int, float]:
        """Measure Hermitian ``p``; returns ``(outcome, probability of that outcome)``.

        ``force`` (+1/-1) selects the outcome instead of sampling; forcing an
        outcome of probability zero raises ``ValueError``.
        """
        if p.n != self.n:
            raise ValueError("Pauli acts on the wrong register size")
        if not p.is_hermitian():
            raise ValueError(f"{p} is not Hermitian")
        anti = [i for i, g in enumerate(self.generators) if symplectic_product(g, p)]
        if not anti:
            sign = self.stabilizer_sign(p)
            if force is not None and force != sign:
                raise ValueError("forced outcome has probability zero")
            return sign, 1.0
        if force is not None:
            outcome = force
        else:
            if rng is None:
                raise ValueError("random outcome needs an rng")
            outcome = 1 - 2 * int(rng.integers(2))
        pivot = anti[0]
        gp = self.generators[pivot]
        gens = list(self.generators)
        for i in anti[1:]:
            gens[i] = multiply(gens[i], gp)
        gens[pivot] = p if outcome == 1 else -p
        self.generators = gens
        self._invalidate()
        return outcome, 0.5

    def measure_z(self, qubit: int, rng=None, force_bit: int | None = None) -> tuple[int, float]:
        """Z measurement returning a bit (0 for +1)."""
        force = None if force_bit is None else 1 - 2 * force_bit
        outcome, prob = self.measure(PauliOperator.single(self.n, qubit, "Z"), rng, force)
        return (1 - outcome) // 2, prob

    def projection_probability(self, paulis: Iterable[PauliOperator]) -> float:
        """Probability that commuting Hermitian ``paulis`` all read +1 (state untouched)."""
        work = self.copy()
        prob = 1.0
        for p in paulis:
            if work.expectation(p) == -1:
                return 0.0
            _, q = work.measure(p, force=1)
            prob *= q
        return prob

    # entanglement ---------------------------------------------------------

    def entropy(self, subset: Iterable[int]) -> int:
        """Entanglement entropy (bits) of ``subset``: rank of restricted generators minus size."""
        subset = set(subset)
        for q in subset:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range")
        m = 0
        for q in subset:
            m |= 1 << q
        mask = m | (m << self.n)
        return rank_of_rows(g.symplectic & mask for g in self.generators) - len(subset)


def measure_pauli(s: StabilizerState, p: PauliOperator, rng) -> tuple[int, StabilizerState]:
    post = s.copy()
    outcome, _ = post.measure(p, rng)
    return outcome, post


def measure_z(s: StabilizerState, qubit: int, rng) -> tuple[int, StabilizerState]:
    post = s.copy()
    bit, _ = post.measure_z(qubit, rng)
    return bit, post


def entropy(s: StabilizerState, subset: Iterable[int]) -> int:
    return s.entropy(subset)


def epr_generators(total: int, pairs: Sequence[tuple[int, int]]) -> list[PauliOperator]:
    gens = []
    for a, b in pairs:
        gens.append(PauliOperator(total, (1 << a) | (1 << b), 0, 0))
        gens.append(PauliOperator(total, 0, (1 << a) | (1 << b), 0))
    return gens


class HpLayout:
    """Wire layout ``[R | U outputs | B-bar]`` of the purified encoded state."""

    def __init__(self, part: Partition, d_wires: Sequence[int] | None = None):
        self.part = part
        n_a, n = part.n_a, part.n
        if d_wires is None:
            d_wires = range(n - part.n_d, n)
        self.r = tuple(range(n_a))
        self.system = tuple(range(n_a, n_a + n))
        self.a = self.system[:n_a]
        self.b = self.system[n_a:]
        self.b_bar = tuple(range(n_a + n, n_a + n + part.n_b))
        d_set = set(d_wires)
        self.d = tuple(self.system[w] for w in d_wires)
        self.c = tuple(self.system[w] for w in range(n) if w not in d_set)
        self.total = n_a + n + part.n_b


def prepare_hp_state(u: CliffordTableau, part: Partition, d_wires=None) -> StabilizerState:
    """EPR pairs R-A and B-Bbar, then ``u`` on A B.  Layout: :class:`HpLayout`."""
    if u.n != part.n:
        raise ValueError(f"tableau acts on {u.n} qubits but partition has n={part.n}")
    lay = HpLayout(part, d_wires)
    pairs = list(zip(lay.r, lay.a)) + list(zip(lay.b, lay.b_bar))
    state = StabilizerState(lay.total, epr_generators(lay.total, pairs), check=False)
    state.apply_clifford(u, lay.system)
    return state


class DecoderLayout:
    """Wire layout ``[R | U outputs | U* outputs | R-bar]`` used by the recovery protocols.

    Before evolution the U* block holds ``A'`` (paired with R-bar) followed by
    B-bar (paired with B).  D-bar is the U* block restricted to ``d_wires``.
    """

    def __init__(self, inst: HpInstance):
        part = inst.part
        n_a, n = part.n_a, part.n
        self.r = tuple(range(n_a))
        self.system = tuple(range(n_a, n_a + n))
        self.mirror = tuple(range(n_a + n, n_a + 2 * n))
        self.r_bar = tuple(range(n_a + 2 * n, 2 * n_a + 2 * n))
        self.total = 2 * n_a + 2 * n
        self.a = self.system[:n_a]
        self.b = self.system[n_a:]
        self.a_prime = self.mirror[:n_a]
        self.b_bar = self.mirror[n_a:]
        self.d = tuple(self.system[w] for w in inst.d_wires)
        self.d_bar = tuple(self.mirror[w] for w in inst.d_wires)
        self.c = tuple(self.system[w] for w in inst.c_wires)
        self.c_bar = tuple(self.mirror[w] for w in inst.c_wires)


def prepare_decoder_state(inst: HpInstance) -> tuple[StabilizerState, DecoderLayout]:
    """Encoded state plus the receiver's mirror copy ``U*`` acting on ``A' Bbar``."""
    lay = DecoderLayout(inst)
    pairs = list(zip(lay.r, lay.a)) + list(zip(lay.b, lay.b_bar)) + list(zip(lay.a_prime, lay.r_bar))
    state = StabilizerState(lay.total, epr_generators(lay.total, pairs), check=False)
    state.apply_clifford(inst.u, lay.system)
    state.apply_clifford(complex_conjugate(inst.u), lay.mirror)
    return state, lay


def epr_fidelity(state: StabilizerState, left: Sequence[int], right: Sequence[int]) -> float:
    """Overlap of the reduced state on ``left right`` with EPR pairs between them."""
    return state.projection_probability(epr_generators(state.n, list(zip(left, right))))
