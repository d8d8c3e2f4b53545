"""Hayden-Preskill instances: partition bookkeeping and the operator-growth maps.

Symplectic vectors here are ints with x bits low and z bits high, sized by the
register they live on (``2*n_a`` bits on A, ``2*n_d`` on D).  Column ``j`` of a
map is the image of generator ``j``: ``X_j`` for ``j < k`` and ``Z_{j-k}``
otherwise, ``k`` being the register size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .clifford import CliffordTableau, conjugate, inverse, random_clifford
from .gf2 import Gf2Matrix, Gf2Solver, RowSpan, row_reduce, span_elements
from .pauli import PauliOperator, embed, extract


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    n_a: int
    n_b: int
    n_c: int
    n_d: int

    def __post_init__(self):
        if min(self.n_a, self.n_b, self.n_c, self.n_d) < 0:
            raise PartitionError("register sizes must be nonnegative")
        if self.n_a + self.n_b != self.n_c + self.n_d:
            raise PartitionError(
                f"n_a + n_b = {self.n_a + self.n_b} but n_c + n_d = {self.n_c + self.n_d}"
            )
        if self.n_a == 0:
            raise PartitionError("input register A must be nonempty")

    @classmethod
    def from_sizes(cls, n: int, n_a: int, n_d: int) -> "Partition":
        if not 0 < n_a <= n or not 0 <= n_d <= n:
            raise PartitionError(f"need 0 < n_a <= n and 0 <= n_d <= n (n={n}, n_a={n_a}, n_d={n_d})")
        return cls(n_a, n - n_a, n - n_d, n_d)

    @property
    def n(self) -> int:
        return self.n_a + self.n_b


def _generator(k: int, j: int) -> PauliOperator:
    return PauliOperator.single(k, j % k, "X" if j < k else "Z")


@dataclass(frozen=True)
class HpInstance:
    """A Clifford ``u`` on A B -> C D together with its growth maps.

    ``d_wires`` lists the output wires of ``u`` forming D (in D order); C is
    the remaining wires in increasing order.  A is input wires ``0..n_a-1``.
    """

    u: CliffordTableau
    part: Partition
    d_wires: tuple[int, ...]
    lambda_d: Gf2Matrix = field(repr=False)
    omega_a: Gf2Matrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.part.n

    @property
    def a_wires(self) -> tuple[int, ...]:
        return tuple(range(self.part.n_a))

    @property
    def b_wires(self) -> tuple[int, ...]:
        return tuple(range(self.part.n_a, self.n))

    @property
    def c_wires(self) -> tuple[int, ...]:
        d = set(self.d_wires)
        return tuple(w for w in range(self.n) if w not in d)

    @property
    def lambda_z(self) -> Gf2Matrix:
        """X-part rows of ``lambda_d``: bit j says whether the D image anticommutes with Z_j."""
        return self.lambda_d.take_rows(range(self.part.n_d))

    @cached_property
    def lambda_d_solver(self) -> Gf2Solver:
        return row_reduce(self.lambda_d)

    @cached_property
    def lambda_z_solver(self) -> Gf2Solver:
        return row_reduce(self.lambda_z)

    @cached_property
    def omega_a_solver(self) -> Gf2Solver:
        return row_reduce(self.omega_a)

    @cached_property
    def u_inverse(self) -> CliffordTableau:
        return inverse(self.u)

    @property
    def kernel_dim(self) -> int:
        return 2 * self.part.n_a - self.lambda_d_solver.rank

    @property
    def kernel_dim_local(self) -> int:
        return 2 * self.part.n_a - self.lambda_z_solver.rank

    def evolve_input(self, p_a: PauliOperator) -> PauliOperator:
        """``U (p_a (x) I_B) U^+`` with phase, on the n output wires."""
        return conjugate(self.u, embed(p_a, self.a_wires, self.n))

    def evolve_output_back(self, q_d: PauliOperator) -> PauliOperator:
        """``U^+ (q_d on D) U`` with phase, on the n input wires."""
        return conjugate(self.u_inverse, embed(q_d, self.d_wires, self.n))

    def to_json(self) -> dict:
        return {
            "u": self.u.to_json(),
            "partition": {
                "n_a": self.part.n_a, "n_b": self.part.n_b,
                "n_c": self.part.n_c, "n_d": self.part.n_d,
            },
            "d_wires": list(self.d_wires),
            "lambda_d": {"cols": self.lambda_d.cols, "rows": self.lambda_d.to_hex_rows()},
            "lambda_z": {"cols": self.lambda_z.cols, "rows": self.lambda_z.to_hex_rows()},
            "omega_a": {"cols": self.omega_a.cols, "rows": self.omega_a.to_hex_rows()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "HpInstance":
        p = data["partition"]
        part = Partition(p["n_a"], p["n_b"], p["n_c"], p["n_d"])
        return build(CliffordTableau.from_json(data["u"]), part, data.get("d_wires"))


def build(u: CliffordTableau, part: Partition, d_wires: Sequence[int] | None = None) -> HpInstance:
    if u.n != part.n:
        raise PartitionError(f"tableau acts on {u.n} qubits but partition has n={part.n}")
    if d_wires is None:
        d_wires = tuple(range(part.n - part.n_d, part.n))
    d_wires = tuple(int(w) for w in d_wires)
    if len(d_wires) != part.n_d or len(set(d_wires)) != part.n_d:
        raise PartitionError("d_wires must list n_d distinct wires")
    if any(not 0 <= w < part.n for w in d_wires):
        raise PartitionError("d_wires out of range")

    n_a, n_d, n = part.n_a, part.n_d, part.n
    a_wires = range(n_a)
    lam_cols = []
    for j in range(2 * n_a):
        img = conjugate(u, embed(_generator(n_a, j), a_wires, n))
        lam_cols.append(extract(img, d_wires).symplectic)
    lambda_d = Gf2Matrix.from_columns(lam_cols, 2 * n_d)

    u_inv = inverse(u)
    om_cols = []
    for j in range(2 * n_d):
        img = conjugate(u_inv, embed(_generator(n_d, j), d_wires, n))
        om_cols.append(extract(img, a_wires).symplectic)
    omega_a = Gf2Matrix.from_columns(om_cols, 2 * n_a)

    inst = HpInstance(u, part, d_wires, lambda_d, omega_a)
    inst.__dict__["u_inverse"] = u_inv
    return inst


def forward_map(inst: HpInstance, p_a: int) -> int:
    """Phaseless D-part of the evolved A Pauli with symplectic vector ``p_a``."""
    return inst.lambda_d.matvec(p_a)


def local_map(inst: HpInstance, p_a: int) -> int:
    return inst.lambda_z.matvec(p_a)


def backward_map(inst: HpInstance, q_d: int) -> int:
    return inst.omega_a.matvec(q_d)


def _check_len(v: int, nbits: int, what: str):
    if v < 0 or v >> nbits:
        raise ValueError(f"{what} must fit in {nbits} bits")


def count_preimages(inst: HpInstance, q_d: int) -> int:
    """Number of A Paulis whose D-part is ``q_d`` (0 outside the image)."""
    _check_len(q_d, 2 * inst.part.n_d, "q_d")
    if inst.lambda_d_solver.solve(q_d) is None:
        return 0
    return 1 << inst.kernel_dim


def count_local_preimages(inst: HpInstance, s: int) -> int:
    _check_len(s, inst.part.n_d, "s")
    if inst.lambda_z_solver.solve(s) is None:
        return 0
    return 1 << inst.kernel_dim_local


def is_perfectly_recoverable(inst: HpInstance) -> bool:
    return inst.kernel_dim == 0


def is_locally_recoverable(inst: HpInstance) -> bool:
    return inst.kernel_dim_local == 0


def entropy_rc(inst: HpInstance) -> int:
    """``S(RC)`` in bits: ``n_c + n_a - dim ker lambda_d``."""
    return inst.part.n_c + inst.part.n_a - inst.kernel_dim


def backward_find_qd(inst: HpInstance, p_a: int) -> int | None:
    """Some D Pauli (symplectic) whose backward evolution restricts to ``p_a`` on A."""
    _check_len(p_a, 2 * inst.part.n_a, "p_a")
    return inst.omega_a_solver.solve(p_a)


def image_elements(inst: HpInstance, limit: int = 1 << 16) -> list[int]:
    """Every element of image(lambda_d)."""
    basis = [inst.lambda_d.matvec(1 << j) for j in range(2 * inst.part.n_a)]
    span = RowSpan()
    independent = [v for v in basis if span.add(v)]
    return span_elements(independent, limit)


def random_instance(n: int, n_a: int, n_d: int, rng) -> HpInstance:
    return build(random_clifford(n, rng), Partition.from_sizes(n, n_a, n_d))
