"""Acceptance criteria 1-12, each reporting one PASS/FAIL line.

Dense comparisons run on the full decoder register ``[R | U | U* | R-bar]``
built from gate lists, so n_a is kept at most 2 to stay within 16 qubits
for n <= 6.
"""

import numpy as np
import pytest

from acceptance_report import record
from helpers import DecoderOracle, encode, gate_instance, hp_state, kernel_mixture, random_sizes, random_state
from hpclifford import dense
from hpclifford.bell import (
    FeedbackTable,
    apply_feedback,
    bell_measurement_distribution,
    measure_bell,
    output_state,
    symbolic_fidelity,
)
from hpclifford.cli import EnsembleConfig, run_ensemble
from hpclifford.hp import entropy_rc, is_locally_recoverable, is_perfectly_recoverable, random_instance
from hpclifford.local import (
    local_distribution,
    local_syndrome_image,
    run_local_protocol,
    single_qubit_error,
    symbolic_fidelity_local,
)
from hpclifford.logical import construct_logical, stabilizer_generators, verify_existence_identity
from hpclifford.otoc_wigner import verify_appendix
from hpclifford.pauli import PauliOperator, all_paulis
from hpclifford.stabilizer import HpLayout, epr_fidelity, prepare_decoder_state, prepare_hp_state

pytestmark = pytest.mark.acceptance


def bell_fidelity_forced(state, lay, inst, q, table):
    s = state.copy()
    measure_bell(s, lay, inst.part.n_d, forced_q_d=q)
    apply_feedback(s, lay, table.lookup(q), inst.part.n_a)
    return epr_fidelity(s, lay.r, lay.r_bar)


def recoverable_gate_instance(rng, n_max=6, min_kernel=0, max_kernel=0):
    while True:
        n, n_a, n_d = random_sizes(rng, n_max)
        inst, gates = gate_instance(n, n_a, n_d, rng)
        if min_kernel <= inst.kernel_dim <= max_kernel:
            return inst, gates


def test_criterion_01_recoverability_matches_operational():
    rng = np.random.default_rng(101)
    mismatches = 0
    for _ in range(1000):
        n, n_a, n_d = random_sizes(rng, 8, n_a_max=3)
        inst = random_instance(n, n_a, n_d, rng)
        table = FeedbackTable.for_instance(inst)
        state, lay = prepare_decoder_state(inst)
        perfect = all(bell_fidelity_forced(state, lay, inst, q, table) == 1.0
                      for q in bell_measurement_distribution(inst))
        mismatches += perfect != is_perfectly_recoverable(inst)
    assert record(1, mismatches == 0, f"1000 instances n<=8, {mismatches} disagreements")


def test_criterion_02_entropy():
    rng = np.random.default_rng(102)
    worst, exact_bad = 0.0, 0
    for _ in range(200):
        n, n_a, n_d = random_sizes(rng, 6, n_a_max=3)
        inst, gates = gate_instance(n, n_a, n_d, rng)
        lay = HpLayout(inst.part, inst.d_wires)
        stab = prepare_hp_state(inst.u, inst.part, inst.d_wires).entropy(lay.r + lay.c)
        exact_bad += stab != entropy_rc(inst)
        psi = hp_state(gates, n_a, n)
        rc = list(lay.r + lay.c)
        rest = [w for w in range(lay.total) if w not in rc]
        # pure state: use the smaller side for the reduced density matrix
        side = rc if len(rc) <= len(rest) else rest
        s = dense.von_neumann_entropy(dense.reduced_density(psi, side))
        worst = max(worst, abs(s - entropy_rc(inst)))
    ok = exact_bad == 0 and worst < 1e-9
    assert record(2, ok, f"200 instances n<=6, integer mismatches {exact_bad}, max dense deviation {worst:.2e}")


def test_criterion_03_bell_probabilities():
    rng = np.random.default_rng(103)
    worst = 0.0
    chi2, dof, worst_z = 0.0, 0, 0.0
    shots = 10_000
    for _ in range(100):
        n, n_a, n_d = random_sizes(rng, 6)
        inst, gates = gate_instance(n, n_a, n_d, rng)
        dist = bell_measurement_distribution(inst)
        oracle = DecoderOracle(inst, gates).bell_probabilities()
        worst = max(worst, max(abs(p - dist.get(q, 0.0)) for q, p in oracle.items()))
        state, lay = prepare_decoder_state(inst)
        counts = dict.fromkeys(dist, 0)
        for _ in range(shots):
            q, _ = measure_bell(state.copy(), lay, n_d, rng)
            counts[q] += 1
        for q, p in dist.items():
            if p < 1:
                worst_z = max(worst_z, abs(counts[q] - shots * p) / np.sqrt(shots * p * (1 - p)))
            chi2 += (counts[q] - shots * p) ** 2 / (shots * p)
        dof += len(dist) - 1
    # pooled Pearson statistic over all instances: mean dof, sd sqrt(2 dof)
    chi_ok = abs(chi2 - dof) < 3 * np.sqrt(2 * dof)
    ok = worst < 1e-10 and chi_ok
    detail = (f"100 instances, max |p - p_dense| {worst:.1e}; 10^4 shots each: "
              f"pooled chi2 {chi2:.0f} on {dof} dof (3 sigma band {3 * np.sqrt(2 * dof):.0f}), "
              f"max per-outcome |z| {worst_z:.2f}")
    assert record(3, ok, detail)


def test_criterion_04_perfect_fidelity():
    rng = np.random.default_rng(104)
    worst, symbolic_bad, outcomes = 0.0, 0, 0
    for _ in range(40):
        inst, gates = recoverable_gate_instance(rng)
        symbolic_bad += symbolic_fidelity(inst) != 1.0
        table = FeedbackTable.for_instance(inst)
        oracle = DecoderOracle(inst, gates)
        n_a, n_d = inst.part.n_a, inst.part.n_d
        # outcome support taken from the dense Born probabilities
        for q, prob in oracle.bell_probabilities().items():
            if prob < 1e-12:
                continue
            outcomes += 1
            _, rho = oracle.bell_outcome(PauliOperator.from_symplectic(n_d, q),
                                         PauliOperator.from_symplectic(n_a, table.lookup(q)))
            worst = max(worst, 1 - oracle.epr_fidelity(rho))
    ok = symbolic_bad == 0 and worst <= 1e-10
    assert record(4, ok, f"40 recoverable instances, {outcomes} outcomes, max 1 - F_dense {worst:.1e}")


def test_criterion_05_imperfect_output_state():
    rng = np.random.default_rng(105)
    worst, dims = 0.0, []
    for _ in range(50):
        inst, gates = recoverable_gate_instance(rng, min_kernel=1, max_kernel=2)
        dims.append(inst.kernel_dim)
        n_a, n_d = inst.part.n_a, inst.part.n_d
        expect = kernel_mixture(output_state(inst), n_a)
        table = FeedbackTable.for_instance(inst)
        oracle = DecoderOracle(inst, gates)
        for q in bell_measurement_distribution(inst):
            _, rho = oracle.bell_outcome(PauliOperator.from_symplectic(n_d, q),
                                         PauliOperator.from_symplectic(n_a, table.lookup(q)))
            worst = max(worst, float(np.max(np.abs(rho - expect))))
    ok = worst < 1e-10
    detail = f"50 instances (kernel dim 1: {dims.count(1)}, dim 2: {dims.count(2)}), max entry deviation {worst:.1e}"
    assert record(5, ok, detail)


def test_criterion_06_logical_operators():
    rng = np.random.default_rng(106)
    worst_logical = worst_stab = 0.0
    for _ in range(50):
        inst, gates = recoverable_gate_instance(rng)
        n, n_a = inst.n, inst.part.n_a
        for p in all_paulis(n_a):
            op = construct_logical(inst, p).to_pauli(inst)
            for _ in range(10):
                psi = random_state(2**n_a, rng)
                lhs = dense.apply_pauli(encode(gates, psi, n_a, n), op).amplitudes
                rhs = encode(gates, dense.pauli_matrix(p) @ psi, n_a, n).amplitudes
                worst_logical = max(worst_logical, float(np.max(np.abs(lhs - rhs))))
        code_state = encode(gates, random_state(2**n_a, rng), n_a, n)
        for g in stabilizer_generators(inst):
            moved = dense.apply_pauli(code_state, g).amplitudes
            worst_stab = max(worst_stab, float(np.max(np.abs(moved - code_state.amplitudes))))
    ok = worst_logical < 1e-10 and worst_stab < 1e-10
    detail = f"50 recoverable instances, logical deviation {worst_logical:.1e}, stabilizer deviation {worst_stab:.1e}"
    assert record(6, ok, detail)


def test_criterion_07_existence_identities():
    rng = np.random.default_rng(107)
    checked = failed = 0
    for n_a in (1, 2):
        for n_d in (1, 2):
            for _ in range(30):
                n = int(rng.integers(max(n_a, n_d), 7))
                checked += 1
                failed += not verify_existence_identity(random_instance(n, n_a, n_d, rng))
    assert record(7, failed == 0, f"{checked} instances over n_A, n_D in {{1,2}}, {failed} failures")


def test_criterion_08_local_protocol():
    rng = np.random.default_rng(108)
    worst_prob = 0.0
    fid_bad = 0
    for _ in range(40):
        n, n_a, n_d = random_sizes(rng, 6)
        inst, gates = gate_instance(n, n_a, n_d, rng)
        dist = local_distribution(inst)
        for key, p in DecoderOracle(inst, gates).z_probabilities().items():
            worst_prob = max(worst_prob, abs(p - dist.get(key, 0.0)))
        target = symbolic_fidelity_local(inst)
        for key in list(dist)[:16]:
            fid_bad += run_local_protocol(inst, forced=key).fidelity != target
    threshold_bad, perfect_seen = 0, 0
    for _ in range(1000):
        n, n_a, n_d = random_sizes(rng, 8, n_a_max=3)
        inst = random_instance(n, n_a, n_d, rng)
        perfect = run_local_protocol(inst, rng).fidelity == 1.0
        perfect_seen += perfect
        threshold_bad += perfect and n_d < 2 * n_a
    ok = worst_prob < 1e-10 and fid_bad == 0 and threshold_bad == 0
    detail = (f"max |p - p_dense| {worst_prob:.1e}, fidelity != 1/N_0 in {fid_bad} runs; "
              f"1000 instances: {perfect_seen} perfect, {threshold_bad} with n_D < 2n_A")
    assert record(8, ok, detail)


def test_criterion_09_error_detection():
    rng = np.random.default_rng(109)
    trials = 10_000
    mismatches = detected = 0
    expected = variance = 0.0
    inst = image = None
    for t in range(trials):
        if t % 100 == 0:
            n_d = int(rng.integers(3, 7))
            while True:
                inst = random_instance(8, 1, n_d, rng)
                if is_locally_recoverable(inst):
                    break
            image = set(local_syndrome_image(inst))
            outside = sum((1 << j) not in image for j in range(n_d))
            p = (2 / 3) * outside / n_d
        j = int(rng.integers(inst.part.n_d))
        letter = "XYZ"[int(rng.integers(3))]
        out = run_local_protocol(inst, rng, error=single_qubit_error(inst, j, letter))
        predicted = letter in "XY" and (1 << j) not in image
        mismatches += out.detected_error != predicted
        detected += out.detected_error
        expected += p
        variance += p * (1 - p)
    z = (detected - expected) / np.sqrt(variance)
    ok = mismatches == 0 and abs(z) < 3
    detail = f"10^4 trials, {mismatches} mismatches, detected {detected} vs expected {expected:.0f} (z = {z:+.2f})"
    assert record(9, ok, detail)


def test_criterion_10_appendix():
    rows = [row for n in (1, 2) for row in verify_appendix(n)]
    worst = max(r.deviation for r in rows)
    ok = all(r.passed for r in rows) and worst < 1e-12
    assert record(10, ok, f"n in {{1,2}}, {len(rows)} checks, max deviation {worst:.1e}")


def test_criterion_11_decoupling_scaling():
    failures = {}
    for n_d in range(2, 6):
        report = run_ensemble(EnsembleConfig(10, 1, n_d, 10_000, seed=7))
        failures[n_d] = 1 - report.recoverable_fraction_bell
    ratios = [failures[d] / failures[d + 1] if failures[d + 1] else float("inf") for d in range(2, 5)]
    ok = all(r >= 3 for r in ratios)
    detail = ("failure fractions " + ", ".join(f"n_D={d}: {f:.4f}" for d, f in failures.items())
              + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios))
    assert record(11, ok, detail)


def test_criterion_12_determinism():
    cfg = EnsembleConfig(8, 1, 4, 2000, seed=12, simulate=True)
    first = run_ensemble(cfg, workers=1).to_csv()
    second = run_ensemble(cfg, workers=1).to_csv()
    pooled = run_ensemble(cfg, workers=8).to_csv()
    ok = first == second == pooled
    detail = f"2000 simulated trials, {len(first.encode())} bytes, repeat identical {first == second}, workers 1 vs 8 identical {first == pooled}"
    assert record(12, ok, detail)
