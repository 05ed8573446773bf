import itertools

import numpy as np
import pytest

from nlsat.cnf import CnfFormula, count_satisfying, random_3cnf
from nlsat.errors import CapExceeded, IntegrityError, NoZeros
from nlsat.nonlinear import NonlinearConfig, drive_register
from nlsat.oracles import (
    OneHitSpec,
    synth_equality_inverse_oracle,
    synth_sat_inverse_oracle,
    truth_function,
)
from nlsat.pipeline import (
    RegisterLayout,
    _check_outcome,
    analytic_outcome,
    apply_oracle_phase_stage,
    build_global_unitary,
    cpi_circuit,
    onehit_trace,
    oracle_compute_circuit,
    prepare_input_state,
    run_onehit,
    run_sat_trial,
    sat_final,
    sat_t0_probability,
    solve_sat,
)
from nlsat.state import StateVector, format_ket, run_circuit


def mismatch_probability(state: StateVector, layout: RegisterLayout) -> float:
    idx = np.arange(state.amplitudes.size)
    n = layout.n
    e1 = (idx >> layout.e1[0]) & ((1 << n) - 1)
    e2 = (idx >> layout.e2[0]) & ((1 << n) - 1)
    return float(state.probabilities()[e1 != e2].sum())


def onehit_layout(n, target):
    oracle = synth_equality_inverse_oracle(OneHitSpec(n, target))
    return oracle, RegisterLayout.for_oracle(oracle)


def test_layout_wires():
    oracle = synth_sat_inverse_oracle(CnfFormula(2, ((1, 2), (-1,))))
    layout = RegisterLayout.for_oracle(oracle)
    assert layout.n == 3
    assert layout.total_wires == 3 * 3 + 1 + 4
    wires = [*layout.e1, *layout.e2, *layout.u, layout.oracle_out, *layout.oracle_ancillas]
    assert sorted(wires) == list(range(layout.total_wires))


def test_prepare_single_pair():
    _, layout = onehit_layout(1, "0")
    s = prepare_input_state(layout)
    # (e1, e2, u) on qubits (0, 1, 2); oracle output on qubit 3
    expected = np.zeros(16)
    for e, u in itertools.product((0, 1), repeat=2):
        expected[e | e << 1 | u << 2] = 0.5
    np.testing.assert_allclose(s.amplitudes, expected, atol=1e-15)


def test_prepare_two_pairs():
    _, layout = onehit_layout(2, "00")
    s = prepare_input_state(layout)
    nz = np.flatnonzero(np.abs(s.amplitudes) > 1e-15)
    assert nz.size == 16
    np.testing.assert_allclose(s.amplitudes[nz], 0.25, atol=1e-15)
    assert mismatch_probability(s, layout) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_prepare_normalized(n):
    _, layout = onehit_layout(n, "0" * n)
    s = prepare_input_state(layout)
    assert abs(s.norm() - 1) <= 1e-12
    assert (2 ** (2 * n)) * (1 / 2 ** n) ** 2 == 1


def _fui_after_cpi(target):
    oracle, layout = onehit_layout(1, target)
    s = prepare_input_state(layout)
    compute = oracle_compute_circuit(oracle, layout)
    s = run_circuit(s, compute)
    before = format_ket(s, [layout.oracle_out, layout.u[0], layout.e2[0]])
    s = run_circuit(s, cpi_circuit(layout))
    after = format_ket(s, [layout.oracle_out, layout.u[0], layout.e2[0]])
    return before, after


def test_phase_stage_worked_case1():
    before, after = _fui_after_cpi("0")
    assert before == "+0.500000|000> +0.500000|010> +0.500000|101> +0.500000|111>"
    assert after == "+0.500000|000> +0.500000|010> +0.500000|101> -0.500000|111>"


def test_phase_stage_worked_case2():
    before, after = _fui_after_cpi("1")
    assert before == "+0.500000|001> +0.500000|011> +0.500000|100> +0.500000|110>"
    assert after == "+0.500000|001> +0.500000|011> +0.500000|100> -0.500000|110>"


def test_trace_lines():
    lines = dict(onehit_trace(OneHitSpec(1, "0")))
    assert lines["post-phase |f u i>"] == "+0.500000|000> +0.500000|010> +0.500000|101> -0.500000|111>"
    assert lines["post-drive |f u i>"] == "+1.000000|000>"
    lines = dict(onehit_trace(OneHitSpec(1, "1")))
    assert lines["post-drive |f u i>"] == "+1.000000|001>"
    assert lines["uncomputed |e1;e2;u>"] == "+1.000000|1;1;0>"


def stage_diagonal(oracle, layout):
    """Phase picked up by each |e1;e2;u> basis state (oracle wires clean)."""
    dim = 1 << (3 * layout.n)
    diag = np.empty(dim, complex)
    for k in range(dim):
        amps = np.zeros(1 << layout.total_wires, complex)
        amps[k] = 1
        out = apply_oracle_phase_stage(StateVector(layout.total_wires, amps), oracle, layout)
        assert abs(abs(out.amplitudes[k]) - 1) < 1e-12
        diag[k] = out.amplitudes[k]
    return diag


def test_global_unitary_single_bit():
    u = build_global_unitary(OneHitSpec(1, "0")).matrix
    for k in range(8):
        e1, u_bit = k & 1, (k >> 2) & 1
        assert u[k, k] == (-1 if (e1 != 0 and u_bit == 1) else 1)
    assert np.count_nonzero(u - np.diag(np.diag(u))) == 0


def test_global_unitary_unitary_and_cap():
    u = build_global_unitary(OneHitSpec(2, "01")).matrix
    assert np.max(np.abs(u.conj().T @ u - np.eye(64))) <= 1e-12
    with pytest.raises(CapExceeded):
        build_global_unitary(OneHitSpec(4, "0000"))


def test_minus_one_count():
    u = build_global_unitary(OneHitSpec(2, "11")).matrix
    assert np.sum(np.diag(u).real == -1) == (2**2 - 1) * 2**2 * 2


@pytest.mark.parametrize("target", ["00", "01", "10", "11"])
def test_global_unitary_matches_gates(target):
    oracle, layout = onehit_layout(2, target)
    np.testing.assert_allclose(
        stage_diagonal(oracle, layout),
        np.diag(build_global_unitary(OneHitSpec(2, target)).matrix),
        atol=1e-12,
    )


def test_phase_stage_diagonal_law_sat():
    f = CnfFormula(1, ((1,),))
    oracle = synth_sat_inverse_oracle(f)
    layout = RegisterLayout.for_oracle(oracle)
    g = truth_function(f)
    diag = stage_diagonal(oracle, layout)
    n = layout.n
    for k, d in enumerate(diag):
        e1 = [(k >> j) & 1 for j in range(n)]
        u = (k >> (2 * n)) & ((1 << n) - 1)
        assert d == (-1) ** (g(e1) * bin(u).count("1"))


def test_onehit_single_bit():
    r = run_onehit(OneHitSpec(1, "0"), backend="dense")
    assert r.success_probability == pytest.approx(1, abs=1e-12)
    assert r.e2_distribution == {"0": pytest.approx(1)}


def test_onehit_three_bits_dense_vs_analytic():
    for target in ("".join(b) for b in itertools.product("01", repeat=3)):
        spec = OneHitSpec(3, target)
        dense = run_onehit(spec, backend="dense")
        analytic = run_onehit(spec, backend="analytic")
        assert dense.success_probability == pytest.approx(1, abs=1e-9)
        np.testing.assert_allclose(dense.e2_probabilities, analytic.e2_probabilities, atol=1e-10)


def test_onehit_iterated():
    nl = NonlinearConfig("iterated", residual_tol=1e-8)
    for backend in ("dense", "structured"):
        r = run_onehit(OneHitSpec(2, "10"), nl, backend)
        assert r.success_probability >= 1 - 1e-6
        assert all(s.steps_used > 0 for s in r.drive_stats[:1])


def test_structured_cap():
    with pytest.raises(CapExceeded):
        run_onehit(OneHitSpec(15, "0" * 15), backend="structured")
    with pytest.raises(CapExceeded):
        run_onehit(OneHitSpec(10, "0" * 10), backend="dense")


def test_support_invariance_through_pipeline():
    f = CnfFormula(2, ((1, -2), (2,)))
    oracle = synth_sat_inverse_oracle(f)
    layout = RegisterLayout.for_oracle(oracle)
    s = prepare_input_state(layout)
    assert mismatch_probability(s, layout) <= 1e-12
    s = apply_oracle_phase_stage(s, oracle, layout)
    assert mismatch_probability(s, layout) <= 1e-12
    s, _ = drive_register(s, layout.u)
    assert mismatch_probability(s, layout) <= 1e-12


def zero_law(f_callable, n_inputs):
    """Expected final distribution from enumerating the truth function."""
    zeros = [k for k in range(1 << n_inputs) if f_callable([(k >> j) & 1 for j in range(n_inputs)]) == 0]
    dist = np.zeros(1 << n_inputs)
    dist[zeros] = 1 / len(zeros)
    return dist


def sat_formulas_small():
    out = [CnfFormula(1, ((1,),)), CnfFormula(1, ((-1,),)), CnfFormula(1, ((1,), (-1,)))]
    lits = [1, -1, 2, -2]
    for c1, c2 in itertools.product(itertools.combinations(lits, 2), repeat=2):
        out.append(CnfFormula(2, (c1, c2)))
    rng = np.random.default_rng(21)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        max_m = max(1, 20 - (3 * (n + 1) + 3))
        out.append(random_3cnf(n, int(rng.integers(1, max_m + 1)), rng))
    return out


def test_backend_agreement_and_outcome_law_sat():
    for f in sat_formulas_small():
        expected = zero_law(truth_function(f), f.var_count + 1)
        dists = {}
        for backend in ("dense", "structured", "analytic"):
            final, _ = sat_final(f, backend=backend)
            dists[backend] = final.e2_probabilities()
        for backend, d in dists.items():
            np.testing.assert_allclose(d, expected, atol=1e-10, err_msg=f"{backend} {f}")


def test_t0_probability_example():
    f = CnfFormula(2, ((1, 2),))
    assert count_satisfying(f) == 3
    for backend in ("dense", "structured", "analytic"):
        assert sat_t0_probability(f, backend=backend) == pytest.approx(0.75, abs=1e-9)


def test_analytic_outcome():
    dist, s = analytic_outcome(truth_function(OneHitSpec(3, "110")), 3)
    assert s == 1 and dist[0b011] == 1
    unsat = CnfFormula(1, ((1,), (-1,)))
    dist, s = analytic_outcome(truth_function(unsat), 2, extra_bit=True)
    assert s == 0 and dist[0b11] == 1
    two = CnfFormula(2, ((1,),))
    dist, s = analytic_outcome(truth_function(two), 3, extra_bit=True)
    assert s == 2
    np.testing.assert_allclose(sorted(dist[dist > 0]), [1 / 3] * 3)
    assert dist[: 1 << 2].sum() == pytest.approx(2 / 3)
    with pytest.raises(NoZeros):
        analytic_outcome(np.ones(4, dtype=np.uint8), 2)


def test_sat_trial_unsat_formula():
    f = CnfFormula(1, ((1,), (-1,)))
    for backend in ("dense", "structured", "analytic"):
        for seed in range(30):
            assert run_sat_trial(f, seed=seed, backend=backend) == (1, (1,))


def test_integrity_check():
    f = CnfFormula(2, ((1,), (2,)))
    with pytest.raises(IntegrityError):
        _check_outcome(f, 0, (0, 1))
    with pytest.raises(IntegrityError):
        _check_outcome(f, 1, (1, 0))
    _check_outcome(f, 0, (1, 1))


def test_solve_examples():
    unit = CnfFormula(1, ((1,),))
    for seed in range(50):
        v = solve_sat(unit, 20, seed=seed)
        assert v.verdict == "SAT" and v.witness == (1,) and v.t_history[-1] == 0
    contra = CnfFormula(1, ((1,), (-1,)))
    v = solve_sat(contra, 8)
    assert v.verdict == "UNSAT" and v.confidence == 0.99609375
    assert v.t_history == [1] * 8
    assert solve_sat(contra, 3, backend="analytic").zeros_count == 0


def test_solve_reproducible():
    f = CnfFormula(3, ((1, 2, 3), (-1, -2), (-3,)))
    a = solve_sat(f, 20, seed=5)
    b = solve_sat(f, 20, seed=5)
    assert a == b
