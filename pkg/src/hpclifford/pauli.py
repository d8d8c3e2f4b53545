"""Phased n-qubit Pauli operators in symplectic form.

A Pauli is stored as ``i**phase * prod_j X_j**x_j Z_j**z_j`` where ``x`` and
``z`` are Python ints used as bitsets (bit ``j`` is qubit ``j``).  With this
convention ``Y = i X Z`` has ``phase == 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

_SIGNS = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0, "i": 1}
_PHASE_PREFIX = ("+", "+i", "-", "-i")
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PAULI_RE = re.compile(r"^\s*([+-]?i?)\s*([IXYZ_]*)\s*$")


def _mask(n: int) -> int:
    return (1 << n) - 1


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True, slots=True)
class PauliOperator:
    """Phased Pauli ``i**phase * X**x Z**z`` on ``n`` qubits."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be nonnegative")
        if (self.x | self.z) >> self.n:
            raise ValueError(f"bits set outside {self.n} qubits")
        if not 0 <= self.phase < 4:
            object.__setattr__(self, "phase", self.phase % 4)

    # construction -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_symplectic(cls, n: int, vec: int, sign: int = 0) -> "PauliOperator":
        """Hermitian Pauli with symplectic vector ``vec`` (x bits low, z bits high).

        ``sign`` is 0 for the ``+`` representative and 1 for ``-``.
        """
        x = vec & _mask(n)
        z = vec >> n
        if z >> n:
            raise ValueError("symplectic vector longer than 2n bits")
        return cls(n, x, z, (_popcount(x & z) + 2 * sign) % 4)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        if not 0 <= qubit < n:
            raise IndexError(f"qubit {qubit} out of range for n={n}")
        bx, bz = _LETTER_BITS[letter]
        return cls(n, bx << qubit, bz << qubit, bx & bz)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse ``'-iXIZY'``-style strings; character ``j`` acts on qubit ``j``."""
        m = _PAULI_RE.match(label)
        if m is None:
            raise ValueError(f"malformed Pauli label {label!r}")
        prefix, body = m.groups()
        body = body.replace("_", "I")
        x = z = 0
        for j, ch in enumerate(body):
            bx, bz = _LETTER_BITS[ch]
            x |= bx << j
            z |= bz << j
        k = _SIGNS[prefix] + _popcount(x & z)
        return cls(len(body), x, z, k % 4)

    @classmethod
    def from_compact(cls, text: str) -> "PauliOperator":
        """Parse the compact ``'(k; x-bits; z-bits)'`` form."""
        parts = [s.strip() for s in text.strip().strip("()").split(";")]
        if len(parts) != 3 or len(parts[1]) != len(parts[2]):
            raise ValueError(f"malformed compact Pauli {text!r}")
        n = len(parts[1])
        x = sum(int(b) << j for j, b in enumerate(parts[1]))
        z = sum(int(b) << j for j, b in enumerate(parts[2]))
        return cls(n, x, z, int(parts[0]) % 4)

    @classmethod
    def from_arrays(cls, x, z, phase: int = 0) -> "PauliOperator":
        x = np.asarray(x, dtype=np.uint8).ravel()
        z = np.asarray(z, dtype=np.uint8).ravel()
        if x.shape != z.shape:
            raise ValueError("x and z must have equal length")
        return cls(x.size, array_to_bits(x), array_to_bits(z), phase)

    # views --------------------------------------------------------------

    @property
    def symplectic(self) -> int:
        """Symplectic vector as an int: x in bits ``0..n-1``, z in ``n..2n-1``."""
        return self.x | (self.z << self.n)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def is_identity(self, up_to_phase: bool = True) -> bool:
        return self.x == 0 and self.z == 0 and (up_to_phase or self.phase == 0)

    def is_hermitian(self) -> bool:
        return (self.phase - _popcount(self.x & self.z)) % 2 == 0

    def hermitian_sign(self) -> int:
        """0 if this equals the ``+`` Hermitian representative, 1 for ``-``.

        Raises for non-Hermitian operators.
        """
        d = (self.phase - _popcount(self.x & self.z)) % 4
        if d % 2:
            raise ValueError("Pauli is not Hermitian")
        return d // 2

    def x_array(self) -> np.ndarray:
        return bits_to_array(self.x, self.n)

    def z_array(self) -> np.ndarray:
        return bits_to_array(self.z, self.n)

    def to_label(self) -> str:
        letters = []
        for j in range(self.n):
            letters.append("IXZY"[((self.x >> j) & 1) | (((self.z >> j) & 1) << 1)])
        k = (self.phase - _popcount(self.x & self.z)) % 4
        return _PHASE_PREFIX[k] + "".join(letters)

    def to_compact(self) -> str:
        xs = "".join(str((self.x >> j) & 1) for j in range(self.n))
        zs = "".join(str((self.z >> j) & 1) for j in range(self.n))
        return f"({self.phase}; {xs}; {zs})"

    def __str__(self) -> str:
        return self.to_label()

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, (self.phase + 2) % 4)


def bits_to_array(v: int, length: int) -> np.ndarray:
    return np.array([(v >> j) & 1 for j in range(length)], dtype=np.uint8)


def array_to_bits(a: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(a):
        if int(b) & 1:
            out |= 1 << j
    return out


def _check_same_n(p: PauliOperator, q: PauliOperator):
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Group product ``p * q`` with exact Z4 phase.

    Moving the X block of ``q`` past the Z block of ``p`` costs ``(-1)**(z_p . x_q)``.
    """
    _check_same_n(p, q)
    k = p.phase + q.phase + 2 * _popcount(p.z & q.x)
    return PauliOperator(p.n, p.x ^ q.x, p.z ^ q.z, k % 4)


def dagger(p: PauliOperator) -> PauliOperator:
    return PauliOperator(p.n, p.x, p.z, (-p.phase + 2 * _popcount(p.x & p.z)) % 4)


def inverse(p: PauliOperator) -> PauliOperator:
    # Paulis are unitary
    return dagger(p)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """``x_p . z_q + z_p . x_q`` mod 2."""
    _check_same_n(p, q)
    return (_popcount(p.x & q.z) + _popcount(p.z & q.x)) & 1


def commutator_sign(p: PauliOperator, q: PauliOperator) -> int:
    """+1 if ``p`` and ``q`` commute, -1 otherwise (equals ``Tr(P Q P^+ Q^+)/d``)."""
    return -1 if symplectic_product(p, q) else 1


def symplectic_inner(u: int, v: int, n: int) -> int:
    """Symplectic form on raw 2n-bit vectors."""
    m = _mask(n)
    return (_popcount((u & m) & (v >> n)) + _popcount((u >> n) & (v & m))) & 1


def _subset_mask(n: int, subset: Iterable[int]) -> int:
    mask = 0
    for j in subset:
        if not 0 <= j < n:
            raise IndexError(f"qubit {j} out of range for n={n}")
        mask |= 1 << j
    return mask


def restrict(p: PauliOperator, subset: Iterable[int]) -> PauliOperator:
    """Keep bits on ``subset`` (same register size), dropping the phase."""
    mask = _subset_mask(p.n, subset)
    return PauliOperator(p.n, p.x & mask, p.z & mask, 0)


def extract(p: PauliOperator, wires: Iterable[int]) -> PauliOperator:
    """Phaseless Pauli on ``len(wires)`` qubits read off the given wires, in order."""
    wires = list(wires)
    x = z = 0
    for k, w in enumerate(wires):
        if not 0 <= w < p.n:
            raise IndexError(f"qubit {w} out of range for n={p.n}")
        x |= ((p.x >> w) & 1) << k
        z |= ((p.z >> w) & 1) << k
    return PauliOperator(len(wires), x, z, 0)


def embed(p: PauliOperator, wires: Iterable[int], n: int) -> PauliOperator:
    """Place ``p`` onto ``wires`` of an ``n``-qubit register, keeping its phase."""
    wires = list(wires)
    if len(wires) != p.n:
        raise ValueError("wire count must equal the Pauli's qubit count")
    x = z = 0
    for k, w in enumerate(wires):
        if not 0 <= w < n:
            raise IndexError(f"qubit {w} out of range for n={n}")
        x |= ((p.x >> k) & 1) << w
        z |= ((p.z >> k) & 1) << w
    return PauliOperator(n, x, z, p.phase)


def tensor(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """``p`` on the first ``p.n`` qubits, ``q`` on the next ``q.n``."""
    return PauliOperator(
        p.n + q.n,
        p.x | (q.x << p.n),
        p.z | (q.z << p.n),
        (p.phase + q.phase) % 4,
    )


def symplectic_vector(p: PauliOperator) -> np.ndarray:
    """Length-2n 0/1 array: x bits then z bits."""
    return np.concatenate([p.x_array(), p.z_array()])


def all_paulis(n: int):
    """All ``4**n`` Hermitian ``+`` Paulis, ordered by their symplectic int."""
    for v in range(4**n):
        yield PauliOperator.from_symplectic(n, v)


def random_pauli(n: int, rng: np.random.Generator, hermitian: bool = True) -> PauliOperator:
    v = random_bits(2 * n, rng)
    if hermitian:
        return PauliOperator.from_symplectic(n, v, int(rng.integers(2)))
    return PauliOperator(n, v & _mask(n), v >> n, int(rng.integers(4)))


def random_bits(nbits: int, rng: np.random.Generator) -> int:
    if nbits == 0:
        return 0
    raw = int.from_bytes(rng.bytes((nbits + 7) // 8), "little")
    return raw & _mask(nbits)
