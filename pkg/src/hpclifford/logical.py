"""Logical operators supported on D and B-bar, and the OTOC existence identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import conjugate_on
from .gf2 import Gf2Matrix, RowSpan, kernel_basis, row_reduce
from .hp import HpInstance, backward_find_qd, is_locally_recoverable, is_perfectly_recoverable
from .pauli import (
    PauliOperator,
    commutator_sign,
    dagger,
    embed,
    extract,
    multiply,
    symplectic_inner,
    tensor,
)

_PHASE_TEXT = ("", "i·", "-", "-i·")


class LogicalExistenceError(ValueError):
    pass


@dataclass(frozen=True)
class LogicalOperator:
    """``i**(-theta_phase) * (q_d (x) p_bbar)`` acts on the code as the input Pauli."""

    q_d: PauliOperator
    p_bbar: PauliOperator
    theta_phase: int

    def to_pauli(self, inst: HpInstance) -> PauliOperator:
        """Full operator on the register ``[U outputs | B-bar]``."""
        n, n_b = inst.n, inst.part.n_b
        on_d = embed(self.q_d, inst.d_wires, n)
        full = tensor(on_d, self.p_bbar)
        return PauliOperator(n + n_b, full.x, full.z, (full.phase - self.theta_phase) % 4)

    def __str__(self) -> str:
        d_part, b_part = (p.to_label().lstrip("+-i") for p in (self.q_d, self.p_bbar))
        return f"{_PHASE_TEXT[(-self.theta_phase) % 4]}{d_part} ⊗ {b_part or '(empty)'}"


def _split_logical(inst: HpInstance, p_a: PauliOperator, q: int) -> LogicalOperator:
    n_b, n_d = inst.part.n_b, inst.part.n_d
    q_d = PauliOperator.from_symplectic(n_d, q)
    back = inst.evolve_output_back(q_d)
    a_part = extract(back, inst.a_wires)
    if a_part.symplectic != p_a.symplectic:
        raise ArithmeticError("backward solve returned a wrong preimage")
    b_part = PauliOperator.from_symplectic(n_b, extract(back, inst.b_wires).symplectic)
    # back = i^theta (p_a (x) b_part) exactly; per-qubit X-before-Z order factorizes
    theta = (back.phase - p_a.phase - b_part.phase) % 4
    # moving b_part through the EPR pairs transposes it: Y^T = -Y
    n_y = (b_part.x & b_part.z).bit_count()
    return LogicalOperator(q_d, b_part, (theta + 2 * n_y) % 4)


def construct_logical(inst: HpInstance, p_a: PauliOperator, strict: bool = True) -> LogicalOperator:
    """Logical version of ``p_a`` built from the backward evolution of some D Pauli."""
    if p_a.n != inst.part.n_a:
        raise ValueError(f"input Pauli must act on {inst.part.n_a} qubits")
    if strict and not is_perfectly_recoverable(inst):
        raise LogicalExistenceError("instance is not perfectly recoverable")
    q = backward_find_qd(inst, p_a.symplectic)
    if q is None:
        raise LogicalExistenceError(f"no D Pauli evolves back onto {p_a}")
    return _split_logical(inst, p_a, q)


def omega_z(inst: HpInstance) -> Gf2Matrix:
    """Backward map restricted to Z-type Paulis on D (``2n_a x n_d``).

    Its rank equals the rank of ``lambda_z``: ``<lambda_d(P), Z^s> = lambda_z(P) . s``.
    """
    n_d = inst.part.n_d
    cols = inst.omega_a.columns()[n_d:]
    return Gf2Matrix.from_columns(cols, 2 * inst.part.n_a)


def construct_local_logical(inst: HpInstance, p_a: PauliOperator, strict: bool = True) -> LogicalOperator:
    """Logical version of ``p_a`` whose D part is a product of Z operators."""
    if p_a.n != inst.part.n_a:
        raise ValueError(f"input Pauli must act on {inst.part.n_a} qubits")
    if strict and not is_locally_recoverable(inst):
        raise LogicalExistenceError("instance is not locally recoverable")
    s = row_reduce(omega_z(inst)).solve(p_a.symplectic)
    if s is None:
        raise LogicalExistenceError(f"no Z-type D Pauli evolves back onto {p_a}")
    return _split_logical(inst, p_a, s << inst.part.n_d)


def stabilizer_generators(inst: HpInstance) -> list[PauliOperator]:
    """``U (X_B X_Bbar) U^+`` and ``U (Z_B Z_Bbar) U^+`` on ``[U outputs | B-bar]``."""
    n, n_a, n_b = inst.n, inst.part.n_a, inst.part.n_b
    total = n + n_b
    gens = []
    for i in range(n_b):
        b, bb = n_a + i, n + i
        for xx in (True, False):
            bits = (1 << b) | (1 << bb)
            p = PauliOperator(total, bits, 0, 0) if xx else PauliOperator(total, 0, bits, 0)
            gens.append(conjugate_on(inst.u, p, range(n)))
    return gens


def in_stabilizer_group(inst: HpInstance, p: PauliOperator) -> bool:
    """Phaseless membership of ``p`` in the span of the code stabilizers."""
    span = RowSpan(g.symplectic for g in stabilizer_generators(inst))
    return p.symplectic in span


def logicals_supported_on(inst: HpInstance, wires) -> list[PauliOperator]:
    """Basis of Paulis on ``wires`` (of the U outputs) that commute with every
    stabilizer but lie outside the stabilizer group.  Empty iff no logical
    operator can be supported there."""
    n, n_b = inst.n, inst.part.n_b
    total = n + n_b
    wires = list(wires)
    gens = stabilizer_generators(inst)
    # commutant restricted to `wires`: solve <v, g> = 0 over the 2|wires| coordinates
    k = len(wires)
    constraints = []
    for g in gens:
        r = extract(g, wires)
        # <v, r> = v_x . r_z + v_z . r_x  ->  row (r_z | r_x)
        constraints.append(r.z | (r.x << k))
    m = Gf2Matrix(len(constraints), 2 * k, tuple(constraints))
    span = RowSpan(g.symplectic for g in gens)
    found = []
    for v in kernel_basis(m):
        full = embed(PauliOperator.from_symplectic(k, v), wires, total)
        if span.add(full.symplectic):
            found.append(full)
    return found


def otoc_alpha(inst: HpInstance, p_a: PauliOperator, q_d: PauliOperator) -> int:
    """``<P_A(t) Q_D P_A(t)^+ Q_D^+>``, a sign for Clifford dynamics."""
    return commutator_sign(inst.evolve_input(p_a), embed(q_d, inst.d_wires, inst.n))


def otoc_alpha_backward(inst: HpInstance, p_a: PauliOperator, q_d: PauliOperator) -> int:
    """Same correlator evaluated as ``<P_A Q_D(-t) P_A^+ Q_D(-t)^+>``."""
    return commutator_sign(embed(p_a, inst.a_wires, inst.n), inst.evolve_output_back(q_d))


def alpha_table(inst: HpInstance) -> np.ndarray:
    """Signs ``alpha[P_A, Q_D]`` indexed by symplectic ints, via forward conjugation."""
    n_a, n_d = inst.part.n_a, inst.part.n_d
    table = np.empty((4**n_a, 4**n_d), dtype=np.int64)
    for pa in range(4**n_a):
        evolved = inst.evolve_input(PauliOperator.from_symplectic(n_a, pa))
        d_part = extract(evolved, inst.d_wires).symplectic
        for qd in range(4**n_d):
            table[pa, qd] = -1 if symplectic_inner(d_part, qd, n_d) else 1
    return table


def f_matrix(n: int) -> np.ndarray:
    """``F[P, Q] = <P Q P^+ Q^+>`` over all 4**n Paulis (symplectic-int order)."""
    size = 4**n
    idx = np.arange(size)
    low = (1 << n) - 1
    xs, zs = idx & low, idx >> n
    overlap = np.bitwise_and.outer(xs, zs) ^ np.bitwise_and.outer(zs, xs)
    parity = (np.bitwise_count(overlap) & 1).astype(np.int64)
    return 1 - 2 * parity


def existence_identity_residuals(inst: HpInstance) -> tuple[int, int]:
    """Number of failing entries in the backward and forward F-alpha identities.

    Backward: ``sum_P F[R, P] alpha[P, Q] == d_A^2 [omega_a(Q) == R]``.
    Forward:  ``sum_Q alpha[P, Q] F[Q, R] == d_D^2 [lambda_d(P) == R]``.
    Integer arithmetic throughout.
    """
    n_a, n_d = inst.part.n_a, inst.part.n_d
    alpha = alpha_table(inst)
    fa, fd = f_matrix(n_a), f_matrix(n_d)
    back = fa @ alpha
    fwd = alpha @ fd
    expect_back = np.zeros_like(back)
    for q in range(4**n_d):
        expect_back[inst.omega_a.matvec(q), q] = 4**n_a
    expect_fwd = np.zeros_like(fwd)
    for p in range(4**n_a):
        expect_fwd[p, inst.lambda_d.matvec(p)] = 4**n_d
    return int(np.count_nonzero(back != expect_back)), int(np.count_nonzero(fwd != expect_fwd))


def verify_existence_identity(inst: HpInstance, max_qubits: int = 4) -> bool:
    if inst.part.n_a > max_qubits or inst.part.n_d > max_qubits:
        raise ValueError("exhaustive identity check limited to small registers")
    return existence_identity_residuals(inst) == (0, 0)


def logical_product_residue(inst: HpInstance, p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """``L(p) L(q) L(pq)^+``: a stabilizer element when the logicals compose correctly."""
    lp = construct_logical(inst, p).to_pauli(inst)
    lq = construct_logical(inst, q).to_pauli(inst)
    lpq = construct_logical(inst, multiply(p, q)).to_pauli(inst)
    return multiply(multiply(lp, lq), dagger(lpq))
