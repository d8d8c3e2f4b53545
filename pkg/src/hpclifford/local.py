"""Recovery by local Z measurements on D and D-bar (many-body teleportation).

The syndrome ``s = m xor mbar`` is matched against the Z-anticommutation map;
strings outside its image flag an error instead of triggering feedback.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import KERNEL_ENUMERATION_LIMIT, FeedbackTable, apply_feedback
from .gf2 import RowSpan, span_elements
from .hp import HpInstance, count_local_preimages
from .pauli import PauliOperator, embed
from .stabilizer import DecoderLayout, StabilizerState, epr_fidelity, prepare_decoder_state


@dataclass
class LocalOutcome:
    m: int
    m_bar: int
    s: int
    feedback_p_a: int | None
    fidelity: float
    detected_error: bool
    probability: float = 1.0

    def to_json(self, n_d: int | None = None) -> dict:
        def bits(v):
            return format(v, f"0{n_d}b")[::-1] if n_d else v

        return {
            "m": bits(self.m),
            "m_bar": bits(self.m_bar),
            "s": bits(self.s),
            "feedback": self.feedback_p_a,
            "fidelity": self.fidelity,
            "detected_error": self.detected_error,
        }


def symbolic_fidelity_local(inst: HpInstance) -> float:
    """``1 / N_0`` with ``N_0 = 2**dim ker lambda_z``."""
    return 1.0 / (1 << inst.kernel_dim_local)


def detect_error(inst: HpInstance, s: int) -> bool:
    """True iff ``s`` is not produced by any input Pauli."""
    return inst.lambda_z_solver.solve(s) is None


def local_syndrome_image(inst: HpInstance) -> list[int]:
    span = RowSpan()
    basis = [v for v in (inst.lambda_z.matvec(1 << j) for j in range(2 * inst.part.n_a)) if span.add(v)]
    return span_elements(basis, KERNEL_ENUMERATION_LIMIT)


def local_distribution(inst: HpInstance) -> dict[tuple[int, int], float]:
    """``(m, mbar)`` -> probability ``N_s / (d_D d_A^2)``; zero-probability pairs omitted."""
    n_d, n_a = inst.part.n_d, inst.part.n_a
    weight = (1 << inst.kernel_dim_local) / (2**n_d * 4**n_a)
    out = {}
    for s in local_syndrome_image(inst):
        for m in range(2**n_d):
            out[(m, m ^ s)] = weight
    return out


def local_probability(inst: HpInstance, m: int, m_bar: int) -> float:
    n_d, n_a = inst.part.n_d, inst.part.n_a
    return count_local_preimages(inst, m ^ m_bar) / (2**n_d * 4**n_a)


def output_state_local(inst: HpInstance) -> list[int]:
    """Kernel of lambda_z, enumerated when at most 2**16 elements, else its basis."""
    basis = inst.lambda_z_solver.kernel_basis()
    if (1 << len(basis)) > KERNEL_ENUMERATION_LIMIT:
        return basis
    return span_elements(basis)


def single_qubit_error(inst: HpInstance, d_index: int, letter: str, mirror: bool = False) -> PauliOperator:
    """Pauli ``letter`` on ``D_{d_index}`` (or on D-bar) in the decoder register."""
    lay = DecoderLayout(inst)
    wires = lay.d_bar if mirror else lay.d
    return embed(PauliOperator.single(1, 0, letter), [wires[d_index]], lay.total)


def measure_local(state: StabilizerState, lay: DecoderLayout, n_d: int, rng=None,
                  forced: tuple[int, int] | None = None) -> tuple[int, int, float]:
    """Z on every D qubit, then every D-bar qubit."""
    m = mb = 0
    prob = 1.0
    for j in range(n_d):
        f = None if forced is None else (forced[0] >> j) & 1
        bit, p = state.measure_z(lay.d[j], rng, f)
        m |= bit << j
        prob *= p
    for j in range(n_d):
        f = None if forced is None else (forced[1] >> j) & 1
        bit, p = state.measure_z(lay.d_bar[j], rng, f)
        mb |= bit << j
        prob *= p
    return m, mb, prob


def run_local_protocol(inst: HpInstance, rng=None, forced: tuple[int, int] | None = None,
                       error: PauliOperator | None = None) -> LocalOutcome:
    """Simulate local measurement, syndrome lookup and feedback on R-bar.

    With ``error`` (a Pauli on the decoder register) applied before measuring,
    syndromes outside the image are reported via ``detected_error``; no
    feedback is applied in that case.
    """
    if rng is not None and not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if rng is None and forced is None:
        rng = np.random.default_rng()
    table = FeedbackTable.for_local(inst)
    state, lay = prepare_decoder_state(inst)
    if error is not None:
        state.apply_pauli(error)
    m, mb, prob = measure_local(state, lay, inst.part.n_d, rng, forced)
    s = m ^ mb
    p_a = table.get(s)
    if p_a is not None:
        apply_feedback(state, lay, p_a, inst.part.n_a)
    fid = epr_fidelity(state, lay.r, lay.r_bar)
    return LocalOutcome(m, mb, s, p_a, fid, p_a is None, prob)
