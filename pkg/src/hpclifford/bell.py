"""Deterministic recovery with generalized Bell measurements on D D-bar.

The receiver mirrors the dynamics with ``U*`` on ``A' Bbar`` (``A'`` paired
with R-bar), measures ``X X`` and ``Z Z`` on every ``D_j Dbar_j`` pair, reads
off the D Pauli of the outcome and applies its preimage under the forward map
on R-bar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf2 import Gf2Solver, span_elements
from .hp import HpInstance, image_elements
from .pauli import PauliOperator, embed
from .stabilizer import DecoderLayout, StabilizerState, epr_fidelity, prepare_decoder_state

KERNEL_ENUMERATION_LIMIT = 1 << 16


class ProtocolViolation(RuntimeError):
    """A measured syndrome lies outside the image of the relevant map."""


@dataclass(frozen=True)
class FeedbackTable:
    """Preimage lookup for the forward map."""

    solver: Gf2Solver
    kernel: tuple[int, ...]

    @classmethod
    def for_instance(cls, inst: HpInstance) -> "FeedbackTable":
        solver = inst.lambda_d_solver
        return cls(solver, tuple(solver.kernel_basis()))

    @classmethod
    def for_local(cls, inst: HpInstance) -> "FeedbackTable":
        solver = inst.lambda_z_solver
        return cls(solver, tuple(solver.kernel_basis()))

    def lookup(self, syndrome: int) -> int:
        p = self.solver.solve(syndrome)
        if p is None:
            raise ProtocolViolation(f"syndrome {syndrome:#x} is not in the image")
        return p

    def get(self, syndrome: int) -> int | None:
        return self.solver.solve(syndrome)


@dataclass
class RecoveryOutcome:
    measured_q_d: int
    feedback_p_a: int
    fidelity: float
    output_kernel: list[int]
    probability: float = 1.0
    bits: dict = field(default_factory=dict, repr=False)

    def to_json(self, inst: HpInstance | None = None) -> dict:
        out = {
            "measured_q_d": self.measured_q_d,
            "feedback_p_a": self.feedback_p_a,
            "fidelity": self.fidelity,
            "kernel_dim": len(self.output_kernel),
            "outcome_probability": self.probability,
        }
        if inst is not None:
            out["measured_q_d_label"] = PauliOperator.from_symplectic(
                inst.part.n_d, self.measured_q_d).to_label()
            out["feedback_label"] = PauliOperator.from_symplectic(
                inst.part.n_a, self.feedback_p_a).to_label()
        return out


def symbolic_fidelity(inst: HpInstance) -> float:
    """EPR fidelity of the recovered pair, ``1 / N_{I_D}``."""
    return 1.0 / (1 << inst.kernel_dim)


def bell_measurement_distribution(inst: HpInstance) -> dict[int, float]:
    """Outcome ``q_d`` (symplectic int on D) -> probability ``N_{q_d} / d_A^2``."""
    weight = (1 << inst.kernel_dim) / 4**inst.part.n_a
    return {q: weight for q in image_elements(inst, KERNEL_ENUMERATION_LIMIT)}


def output_state(inst: HpInstance) -> list[int]:
    """A-register Paulis ``P_R`` spanning the output mixture (each weight ``1/N_{I_D}``)."""
    basis = inst.lambda_d_solver.kernel_basis()
    return span_elements(basis, KERNEL_ENUMERATION_LIMIT)


def bell_pair_observables(state_n: int, d: tuple, d_bar: tuple, j: int):
    a, b = d[j], d_bar[j]
    xx = PauliOperator(state_n, (1 << a) | (1 << b), 0, 0)
    zz = PauliOperator(state_n, 0, (1 << a) | (1 << b), 0)
    return xx, zz


def measure_bell(state: StabilizerState, lay: DecoderLayout, n_d: int, rng=None,
                 forced_q_d: int | None = None) -> tuple[int, float]:
    """Measure every ``D_j Dbar_j`` pair; returns ``(q_d, probability)``.

    The XX outcome gives the z bit of ``q_d`` and the ZZ outcome its x bit.
    """
    q_x = q_z = 0
    prob = 1.0
    for j in range(n_d):
        xx, zz = bell_pair_observables(state.n, lay.d, lay.d_bar, j)
        fx = fz = None
        if forced_q_d is not None:
            fz_bit = (forced_q_d >> (n_d + j)) & 1
            fx_bit = (forced_q_d >> j) & 1
            fx, fz = 1 - 2 * fz_bit, 1 - 2 * fx_bit
        a, pa = state.measure(xx, rng, fx)
        b, pb = state.measure(zz, rng, fz)
        prob *= pa * pb
        q_z |= ((1 - a) // 2) << j
        q_x |= ((1 - b) // 2) << j
    return q_x | (q_z << n_d), prob


def apply_feedback(state: StabilizerState, lay: DecoderLayout, p_a: int, n_a: int, sign: int = 0):
    pauli = PauliOperator.from_symplectic(n_a, p_a, sign)
    state.apply_pauli(embed(pauli, lay.r_bar, state.n))


def run_bell_protocol(inst: HpInstance, rng=None, forced_q_d: int | None = None,
                      error: PauliOperator | None = None, feedback_sign: int = 0,
                      return_state: bool = False):
    """Simulate the full protocol on the stabilizer backend.

    ``error`` is a Pauli on the decoder register applied before measuring.
    ``forced_q_d`` selects the Bell outcome (it must have nonzero probability).
    """
    if rng is not None and not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    table = FeedbackTable.for_instance(inst)
    if forced_q_d is not None and table.get(forced_q_d) is None and error is None:
        raise ProtocolViolation("forced outcome lies outside the image and never occurs")
    state, lay = prepare_decoder_state(inst)
    if error is not None:
        state.apply_pauli(error)
    if rng is None and forced_q_d is None:
        rng = np.random.default_rng()
    q_d, prob = measure_bell(state, lay, inst.part.n_d, rng, forced_q_d)
    p_a = table.lookup(q_d)
    apply_feedback(state, lay, p_a, inst.part.n_a, feedback_sign)
    fid = epr_fidelity(state, lay.r, lay.r_bar)
    outcome = RecoveryOutcome(q_d, p_a, fid, list(table.kernel), prob)
    if return_state:
        return outcome, state, lay
    return outcome
