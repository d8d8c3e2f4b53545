"""Clifford unitaries stored as conjugation tableaux.

A tableau keeps ``U X_j U^+`` and ``U Z_j U^+`` for every qubit; the global
phase of ``U`` is not represented.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf2 import RowSpan, rank_of_rows
from .pauli import (
    PauliOperator,
    commutator_sign,
    multiply,
    random_bits,
    symplectic_inner,
)

Gate = tuple[str, tuple[int, ...]]

GATE_ARITY = {
    "I": 1, "H": 1, "S": 1, "SDG": 1, "X": 1, "Y": 1, "Z": 1,
    "CNOT": 2, "CZ": 2, "SWAP": 2,
}
_ALIASES = {"CX": "CNOT", "SDAG": "SDG", "S_DAG": "SDG", "ID": "I"}


@dataclass(frozen=True)
class CliffordTableau:
    n: int
    x_images: tuple[PauliOperator, ...]
    z_images: tuple[PauliOperator, ...]

    def __post_init__(self):
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise ValueError("tableau needs n X images and n Z images")
        for p in self.x_images + self.z_images:
            if p.n != self.n:
                raise ValueError("image acts on the wrong number of qubits")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(
            n,
            tuple(PauliOperator.single(n, j, "X") for j in range(n)),
            tuple(PauliOperator.single(n, j, "Z") for j in range(n)),
        )

    def is_valid(self) -> bool:
        """Symplectic commutation relations and Hermitian images."""
        gens = self.x_images + self.z_images
        if not all(g.is_hermitian() for g in gens):
            return False
        n = self.n
        for a in range(2 * n):
            for b in range(a + 1, 2 * n):
                expect = -1 if b == a + n else 1
                if commutator_sign(gens[a], gens[b]) != expect:
                    return False
        return True

    def symplectic_matrix(self) -> np.ndarray:
        """2n x 2n 0/1 matrix whose column ``j`` is the image of generator ``j``."""
        cols = [g.symplectic for g in self.x_images + self.z_images]
        m = 2 * self.n
        return np.array([[(c >> i) & 1 for c in cols] for i in range(m)], dtype=np.uint8)

    def __eq__(self, other):
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return (
            self.n == other.n
            and self.x_images == other.x_images
            and self.z_images == other.z_images
        )

    def __hash__(self):
        return hash((self.n, self.x_images, self.z_images))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "x_images": [p.to_label() for p in self.x_images],
            "z_images": [p.to_label() for p in self.z_images],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "CliffordTableau":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        xs = tuple(PauliOperator.from_label(s) for s in data["x_images"])
        zs = tuple(PauliOperator.from_label(s) for s in data["z_images"])
        tab = cls(n, xs, zs)
        if not tab.is_valid():
            raise ValueError("images do not form a valid Clifford tableau")
        return tab


def conjugate(u: CliffordTableau, p: PauliOperator) -> PauliOperator:
    """``U p U^+`` with exact phase."""
    if p.n != u.n:
        raise ValueError(f"Pauli on {p.n} qubits, tableau on {u.n}")
    acc = PauliOperator(u.n, 0, 0, p.phase)
    x, z = p.x, p.z
    for j in range(u.n):
        if (x >> j) & 1:
            acc = multiply(acc, u.x_images[j])
        if (z >> j) & 1:
            acc = multiply(acc, u.z_images[j])
    return acc


def conjugate_on(u: CliffordTableau, p: PauliOperator, wires: Sequence[int]) -> PauliOperator:
    """Conjugate by ``U`` acting on ``wires`` of the larger register of ``p``."""
    if len(wires) != u.n:
        raise ValueError("wire count must equal the tableau size")
    sub_x = sub_z = 0
    for k, w in enumerate(wires):
        sub_x |= ((p.x >> w) & 1) << k
        sub_z |= ((p.z >> w) & 1) << k
    img = conjugate(u, PauliOperator(u.n, sub_x, sub_z, 0))
    x, z = p.x, p.z
    for k, w in enumerate(wires):
        x = (x & ~(1 << w)) | (((img.x >> k) & 1) << w)
        z = (z & ~(1 << w)) | (((img.z >> k) & 1) << w)
    return PauliOperator(p.n, x, z, (p.phase + img.phase) % 4)


def compose(u: CliffordTableau, v: CliffordTableau) -> CliffordTableau:
    """Tableau of ``U V`` (``V`` acts first)."""
    if u.n != v.n:
        raise ValueError("size mismatch")
    return CliffordTableau(
        u.n,
        tuple(conjugate(u, p) for p in v.x_images),
        tuple(conjugate(u, p) for p in v.z_images),
    )


def inverse(u: CliffordTableau) -> CliffordTableau:
    """Tableau of ``U^+``.

    The symplectic part is ``Omega M^T Omega``; each sign is then fixed so that
    conjugating back by ``U`` lands exactly on ``+X_j`` / ``+Z_j``.
    """
    n = u.n
    low = (1 << n) - 1
    # Row j of M^T Omega-swapped gives the inverse image of X_j / Z_j:
    # generator e has inverse image w with <w, col_k> equal to the symplectic
    # pairing of e with the k-th standard generator.
    cols = [g.symplectic for g in u.x_images + u.z_images]

    def inverse_image(target_bit: int) -> int:
        # w_k = <target, image of generator k>, then swap halves (Omega)
        w = 0
        for k, c in enumerate(cols):
            w |= symplectic_inner(target_bit, c, n) << k
        return ((w & low) << n) | (w >> n)

    xs, zs = [], []
    for j in range(n):
        for target, store, bare in (
            (1 << j, xs, PauliOperator.single(n, j, "X")),
            (1 << (n + j), zs, PauliOperator.single(n, j, "Z")),
        ):
            cand = PauliOperator.from_symplectic(n, inverse_image(target))
            back = conjugate(u, cand)
            if back.symplectic != bare.symplectic:
                raise ArithmeticError("tableau is not symplectic")
            if back.phase != bare.phase:
                cand = -cand
            store.append(cand)
    return CliffordTableau(n, tuple(xs), tuple(zs))


def complex_conjugate(u: CliffordTableau) -> CliffordTableau:
    """Tableau of ``U*``: images of the real generators get conjugated phases."""
    def conj(p):
        return PauliOperator(p.n, p.x, p.z, (-p.phase) % 4)

    return CliffordTableau(
        u.n, tuple(conj(p) for p in u.x_images), tuple(conj(p) for p in u.z_images)
    )


# gates ------------------------------------------------------------------


def normalize_gate(name: str) -> str:
    key = name.strip().upper()
    key = _ALIASES.get(key, key)
    if key not in GATE_ARITY:
        raise ValueError(f"unknown gate {name!r}")
    return key


def _gate_conjugate(name: str, qubits: tuple[int, ...], p: PauliOperator) -> PauliOperator:
    """Conjugate ``p`` by a single gate, in place on its register."""
    n = p.n
    x, z, k = p.x, p.z, p.phase
    if name == "I":
        return p
    if len(qubits) == 1:
        (q,) = qubits
        xb = (x >> q) & 1
        zb = (z >> q) & 1
        bit = 1 << q
        if name == "H":
            # X -> Z, Z -> X, Y = iXZ -> iZX = -Y
            k += 2 * (xb & zb)
            x = (x & ~bit) | (zb << q)
            z = (z & ~bit) | (xb << q)
        elif name == "S":
            # X -> Y = iXZ, Z -> Z
            if xb:
                k += 1
                z ^= bit
        elif name == "SDG":
            # X -> -Y = -iXZ
            if xb:
                k += 3
                z ^= bit
        elif name == "X":
            k += 2 * zb
        elif name == "Z":
            k += 2 * xb
        elif name == "Y":
            k += 2 * (xb ^ zb)
        return PauliOperator(n, x, z, k % 4)
    a, b = qubits
    xa, za = (x >> a) & 1, (z >> a) & 1
    xb, zb = (x >> b) & 1, (z >> b) & 1
    if name == "CNOT":
        # X_a -> X_a X_b, Z_b -> Z_a Z_b; X-before-Z order survives, no sign
        x ^= xa << b
        z ^= zb << a
    elif name == "CZ":
        # X_a -> X_a Z_b, X_b -> Z_a X_b; reordering Z_b X_b costs (-1)^{x_a x_b}
        k += 2 * (xa & xb)
        z ^= (xb << a) | (xa << b)
    elif name == "SWAP":
        x = (x & ~((1 << a) | (1 << b))) | (xa << b) | (xb << a)
        z = (z & ~((1 << a) | (1 << b))) | (za << b) | (zb << a)
    return PauliOperator(n, x, z, k % 4)


def apply_gate(u: CliffordTableau, name: str, qubits: Sequence[int]) -> CliffordTableau:
    """Tableau of ``G U`` where ``G`` is a named gate."""
    name = normalize_gate(name)
    qubits = tuple(int(q) for q in qubits)
    if len(qubits) != GATE_ARITY[name]:
        raise ValueError(f"{name} takes {GATE_ARITY[name]} qubit(s)")
    for q in qubits:
        if not 0 <= q < u.n:
            raise IndexError(f"gate qubit {q} out of range for n={u.n}")
    if len(set(qubits)) != len(qubits):
        raise ValueError("two-qubit gate needs distinct qubits")
    return CliffordTableau(
        u.n,
        tuple(_gate_conjugate(name, qubits, p) for p in u.x_images),
        tuple(_gate_conjugate(name, qubits, p) for p in u.z_images),
    )


def from_gates(gates: Iterable[Gate], n: int) -> CliffordTableau:
    """Fold a gate list (first gate applied first) into a tableau."""
    u = CliffordTableau.identity(n)
    for name, qubits in gates:
        u = apply_gate(u, name, qubits)
    return u


def parse_gates(text: str) -> list[Gate]:
    """Parse ``"H 0 / S 2 / CNOT 0 3"`` or one gate per line; ``#`` starts a comment."""
    gates = []
    for chunk in text.replace("/", "\n").splitlines():
        chunk = chunk.split("#", 1)[0].strip()
        if not chunk:
            continue
        parts = chunk.replace(",", " ").split()
        name = normalize_gate(parts[0])
        qubits = tuple(int(q) for q in parts[1:])
        if len(qubits) != GATE_ARITY[name]:
            raise ValueError(f"line {chunk!r}: {name} takes {GATE_ARITY[name]} qubit(s)")
        gates.append((name, qubits))
    return gates


def format_gates(gates: Iterable[Gate]) -> str:
    return "".join(f"{name} {' '.join(map(str, qs))}\n" for name, qs in gates)


def gate_count_qubits(gates: Iterable[Gate]) -> int:
    return max((max(qs) for _, qs in gates), default=-1) + 1


def random_gates(n: int, n_gates: int, rng: np.random.Generator) -> list[Gate]:
    """Random H/S/CNOT circuit; used to produce instances with a known gate list."""
    gates = []
    for _ in range(n_gates):
        r = rng.random()
        if n > 1 and r < 0.4:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(("CNOT", (int(a), int(b))))
        elif r < 0.7:
            gates.append(("H", (int(rng.integers(n)),)))
        else:
            gates.append(("S", (int(rng.integers(n)),)))
    return gates


# sampling ---------------------------------------------------------------


def _random_in_span(basis: list[int], rng: np.random.Generator, nonzero: bool) -> int:
    k = len(basis)
    while True:
        coeffs = random_bits(k, rng)
        if coeffs or not nonzero:
            break
    v = 0
    for i in range(k):
        if (coeffs >> i) & 1:
            v ^= basis[i]
    return v


def _independent(vectors: list[int]) -> list[int]:
    span = RowSpan()
    out = []
    for v in vectors:
        if span.add(v):
            out.append(v)
    return out


def random_symplectic_images(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Uniformly random symplectic basis ``(a_j, b_j)`` of GF(2)^{2n}.

    Each ``a`` is uniform and nonzero in the remaining symplectic complement,
    each ``b`` uniform among its partners, then the complement shrinks by two.
    """
    basis = [1 << i for i in range(2 * n)]
    pairs = []
    for _ in range(n):
        a = _random_in_span(basis, rng, nonzero=True)
        b = _random_in_span(basis, rng, nonzero=False)
        if not symplectic_inner(a, b, n):
            partner = next(v for v in basis if symplectic_inner(a, v, n))
            b ^= partner
        pairs.append((a, b))
        projected = [
            v ^ (a if symplectic_inner(v, b, n) else 0) ^ (b if symplectic_inner(v, a, n) else 0)
            for v in basis
        ]
        basis = _independent(projected)
    return pairs


def random_clifford(n: int, rng_seed=None) -> CliffordTableau:
    """Uniformly random n-qubit Clifford (up to global phase)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    pairs = random_symplectic_images(n, rng)
    signs = random_bits(2 * n, rng)
    xs = tuple(
        PauliOperator.from_symplectic(n, a, (signs >> j) & 1) for j, (a, _) in enumerate(pairs)
    )
    zs = tuple(
        PauliOperator.from_symplectic(n, b, (signs >> (n + j)) & 1) for j, (_, b) in enumerate(pairs)
    )
    return CliffordTableau(n, xs, zs)


def symplectic_key(u: CliffordTableau) -> tuple[int, ...]:
    """Hashable symplectic part (phases dropped)."""
    return tuple(g.symplectic for g in u.x_images + u.z_images)


def is_symplectic_basis(pairs: Sequence[tuple[int, int]], n: int) -> bool:
    flat = [v for pair in pairs for v in pair]
    if rank_of_rows(flat) != 2 * n:
        return False
    for i, (a, b) in enumerate(pairs):
        if not symplectic_inner(a, b, n):
            return False
        for c, d in pairs[i + 1:]:
            if any(symplectic_inner(u, v, n) for u in (a, b) for v in (c, d)):
                return False
    return True
