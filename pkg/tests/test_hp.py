import itertools
import json

import numpy as np
import pytest

from helpers import gate_instance
from hpclifford import dense
from hpclifford.clifford import CliffordTableau, conjugate, from_gates, inverse, random_clifford
from hpclifford.gf2 import Gf2Matrix
from hpclifford.hp import (
    HpInstance,
    Partition,
    PartitionError,
    backward_find_qd,
    build,
    count_local_preimages,
    count_preimages,
    entropy_rc,
    forward_map,
    is_locally_recoverable,
    is_perfectly_recoverable,
    random_instance,
)
from hpclifford.pauli import PauliOperator, all_paulis, embed, extract, multiply
from hpclifford.stabilizer import HpLayout, prepare_hp_state


def swap_instance():
    return build(from_gates([("SWAP", (0, 1))], 2), Partition(1, 1, 1, 1))


def identity_instance(n_a=1, n_b=1):
    n = n_a + n_b
    return build(CliffordTableau.identity(n), Partition(n_a, n_b, n_a, n_b), range(n_a, n))


def dense_pauli_decomposition(m, n):
    """The Pauli (symplectic int) proportional to a dense matrix, by trace overlaps."""
    d = 2**n
    for p in all_paulis(n):
        if abs(abs(np.trace(dense.pauli_matrix(p).conj().T @ m)) - d) < 1e-8:
            return p.symplectic
    raise AssertionError("matrix is not a Pauli")


def test_partition_validation():
    with pytest.raises(PartitionError):
        Partition(1, 2, 2, 2)
    with pytest.raises(PartitionError):
        Partition.from_sizes(3, 0, 1)
    with pytest.raises(PartitionError):
        build(CliffordTableau.identity(3), Partition(1, 1, 1, 1))
    assert Partition.from_sizes(5, 2, 3) == Partition(2, 3, 2, 3)


def test_swap_lambda_is_identity():
    inst = swap_instance()
    assert inst.lambda_d == Gf2Matrix.identity(2)
    assert is_perfectly_recoverable(inst)
    assert backward_find_qd(inst, PauliOperator.from_label("X").symplectic) == PauliOperator.from_label("X").symplectic
    assert entropy_rc(inst) == 2


def test_identity_with_d_equal_b():
    inst = identity_instance()
    assert inst.lambda_d == Gf2Matrix.zeros(2, 2)
    assert not is_perfectly_recoverable(inst)
    assert count_preimages(inst, 0) == 4
    assert entropy_rc(inst) == inst.part.n_c - inst.part.n_a


def test_lambda_columns_match_dense(rng):
    n, n_a, n_d = 5, 2, 3
    inst, gates = gate_instance(n, n_a, n_d, rng)
    m = dense.circuit_unitary(gates, n)
    for j in range(2 * n_a):
        gen = PauliOperator.single(n_a, j % n_a, "X" if j < n_a else "Z")
        img = m @ dense.pauli_matrix(embed(gen, inst.a_wires, n)) @ m.conj().T
        full = dense_pauli_decomposition(img, n)
        d_part = extract(PauliOperator(n, full & ((1 << n) - 1), full >> n), inst.d_wires)
        assert inst.lambda_d.column(j) == d_part.symplectic


def test_omega_columns_from_inverse(rng):
    inst = random_instance(6, 2, 3, rng)
    u_inv = inverse(inst.u)
    for j in range(2 * 3):
        gen = PauliOperator.single(3, j % 3, "X" if j < 3 else "Z")
        img = conjugate(u_inv, embed(gen, inst.d_wires, 6))
        assert inst.omega_a.column(j) == extract(img, inst.a_wires).symplectic


def test_lambda_z_is_x_rows(rng):
    inst = random_instance(6, 2, 4, rng)
    for p in all_paulis(2):
        q = inst.lambda_d.matvec(p.symplectic)
        assert inst.lambda_z.matvec(p.symplectic) == q & 0b1111
        # bit j flags anticommutation of the D image with Z_j
        img = extract(inst.evolve_input(p), inst.d_wires)
        for j in range(4):
            z_j = PauliOperator.single(4, j, "Z")
            anti = (img.x >> j) & 1
            assert anti == (multiply(img, z_j) != multiply(z_j, img))


def test_count_preimages_brute_force(rng):
    for _ in range(10):
        inst = random_instance(6, 2, 2, rng)
        tally = {}
        for p in all_paulis(2):
            q = extract(inst.evolve_input(p), inst.d_wires).symplectic
            tally[q] = tally.get(q, 0) + 1
        for q in range(16):
            assert count_preimages(inst, q) == tally.get(q, 0)
        assert sum(count_preimages(inst, q) for q in range(16)) == 16


def test_count_local_preimages_brute_force(rng):
    for _ in range(10):
        inst = random_instance(6, 1, 3, rng)
        tally = {}
        for p in all_paulis(1):
            s = extract(inst.evolve_input(p), inst.d_wires).x
            tally[s] = tally.get(s, 0) + 1
        for s in range(8):
            assert count_local_preimages(inst, s) == tally.get(s, 0)


def test_linearity_against_direct_conjugation(rng):
    for _ in range(20):
        inst = random_instance(5, 2, 3, rng)
        for p, q in itertools.product(all_paulis(2), repeat=2):
            direct = extract(inst.evolve_input(multiply(p, q)), inst.d_wires).symplectic
            assert forward_map(inst, p.symplectic) ^ forward_map(inst, q.symplectic) == direct


def test_recoverability_equivalence_chain(rng):
    for _ in range(200):
        n = int(rng.integers(2, 8))
        n_a = int(rng.integers(1, min(3, n) + 1))
        inst = random_instance(n, n_a, int(rng.integers(1, n + 1)), rng)
        rec = is_perfectly_recoverable(inst)
        assert rec == (count_preimages(inst, 0) == 1)
        assert rec == (entropy_rc(inst) == n_a + inst.part.n_c)
        if is_locally_recoverable(inst):
            assert rec


def test_entropy_rc_matches_stabilizer(rng):
    for _ in range(200):
        n = int(rng.integers(2, 7))
        n_a = int(rng.integers(1, n + 1))
        inst = random_instance(n, n_a, int(rng.integers(0, n + 1)), rng)
        lay = HpLayout(inst.part, inst.d_wires)
        s = prepare_hp_state(inst.u, inst.part, inst.d_wires)
        assert s.entropy(lay.r + lay.c) == entropy_rc(inst)


def test_backward_find_zero():
    inst = swap_instance()
    assert backward_find_qd(inst, 0) == 0


def test_backward_find_solves(rng):
    done = 0
    while done < 100:
        inst = random_instance(6, 2, 5, rng)
        if not is_perfectly_recoverable(inst):
            continue
        done += 1
        p = PauliOperator.from_symplectic(2, int(rng.integers(16)))
        q = backward_find_qd(inst, p.symplectic)
        assert q is not None
        back = inst.evolve_output_back(PauliOperator.from_symplectic(5, q))
        assert extract(back, inst.a_wires).symplectic == p.symplectic


def test_explicit_d_wires(rng):
    u = random_clifford(5, rng)
    inst = build(u, Partition.from_sizes(5, 1, 2), d_wires=[0, 3])
    assert inst.c_wires == (1, 2, 4)
    lay = HpLayout(inst.part, inst.d_wires)
    s = prepare_hp_state(u, inst.part, inst.d_wires)
    assert s.entropy(lay.r + lay.c) == entropy_rc(inst)
    with pytest.raises(PartitionError):
        build(u, Partition.from_sizes(5, 1, 2), d_wires=[0, 0])


def test_json_round_trip(rng):
    inst = random_instance(6, 2, 3, rng)
    data = json.loads(json.dumps(inst.to_json()))
    back = HpInstance.from_json(data)
    assert back.lambda_d == inst.lambda_d and back.omega_a == inst.omega_a
    assert Gf2Matrix.from_hex_rows(data["lambda_z"]["rows"], data["lambda_z"]["cols"]) == inst.lambda_z


def test_length_checks():
    inst = swap_instance()
    with pytest.raises(ValueError):
        count_preimages(inst, 1 << 2)
    with pytest.raises(ValueError):
        backward_find_qd(inst, 1 << 2)
