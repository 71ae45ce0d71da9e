import numpy as np
import pytest

from qnetcode.pauli import PauliOperator
from qnetcode.rng import stream
from qnetcode.stabsim import StabilizerState, new_state, prepare_bell

from dense_oracle import DenseState


def random_clifford_circuit(n, depth, rng):
    gates = []
    for _ in range(depth):
        kind = rng.integers(5)
        q = int(rng.integers(n))
        if kind == 0 and n > 1:
            t = int(rng.integers(n - 1))
            t = t if t < q else t + 1
            gates.append(("CNOT", q, t))
        elif kind == 1:
            gates.append(("H", q))
        else:
            gates.append(("XYZ"[kind - 2], q))
    return gates


def all_pauli_strings(n):
    for code in range(4 ** n):
        yield "".join("IXYZ"[(code // 4 ** i) % 4] for i in range(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_expectations_match_dense_oracle(n):
    """After random circuits, every Pauli expectation agrees with a dense
    statevector simulation."""
    for seed in range(8):
        rng = stream(100 + seed, n)
        gates = random_clifford_circuit(n, 25, rng)
        stab = StabilizerState(n)
        dense = DenseState(n)
        for g in gates:
            stab.apply_gate(g)
            dense.apply_gate(g)
        assert stab.tableau_ok()
        for s in all_pauli_strings(n):
            got = stab.expectation(PauliOperator.from_string(s))
            want = dense.expectation_pauli(s)
            assert got == pytest.approx(want, abs=1e-9), (s, gates)


@pytest.mark.parametrize("n", [2, 3])
def test_measurements_match_dense_oracle(n):
    """Feed the tableau's measurement outcomes into dense projections and
    compare probabilities and post-measurement expectations."""
    for seed in range(10):
        rng = stream(200 + seed, n)
        stab = StabilizerState(n)
        dense = DenseState(n)
        for step in range(12):
            for g in random_clifford_circuit(n, 4, rng):
                stab.apply_gate(g)
                dense.apply_gate(g)
            q = int(rng.integers(n))
            prob0 = dense.prob_z0(q)
            expect = stab.expectation(PauliOperator.single(n, q, "Z"))
            want_prob0 = {1: 1.0, -1: 0.0, 0: 0.5}[expect]
            assert prob0 == pytest.approx(want_prob0, abs=1e-9)
            outcome = stab.measure_z(q, rng)
            dense.project_z(q, outcome)
        for s in all_pauli_strings(n):
            got = stab.expectation(PauliOperator.from_string(s))
            assert got == pytest.approx(dense.expectation_pauli(s), abs=1e-9)


def test_repeated_measurement_is_stable():
    rng = stream(1)
    state = StabilizerState(3)
    state.h(0)
    state.cnot(0, 1)
    first = state.measure_z(0, rng)
    for _ in range(5):
        assert state.measure_z(0, rng) == first
        assert state.measure_z(1, rng) == first


def test_bell_pair_measurements():
    rng = stream(2)
    state = new_state(2)
    prepare_bell(state, 0, 1)
    assert state.expectation(PauliOperator.from_string("XX")) == 1
    assert state.expectation(PauliOperator.from_string("ZZ")) == 1
    assert state.expectation(PauliOperator.from_string("YY")) == -1
    assert state.bell_measure(0, 1, rng) == (0, 0)


@pytest.mark.parametrize(
    "letter,expected",
    [("I", (0, 0)), ("X", (0, 1)), ("Z", (1, 0)), ("Y", (1, 1))],
)
def test_bell_measure_reads_error_labels(letter, expected):
    """An error sigma on one Bell half shows up as (xx, zz) = (z, x)."""
    rng = stream(3)
    state = new_state(2)
    prepare_bell(state, 0, 1)
    state.apply_pauli(PauliOperator.from_string(letter + "I"))
    assert state.bell_measure(0, 1, rng) == expected


def test_deterministic_measurements():
    rng = stream(4)
    state = StabilizerState(2)
    assert state.measure_z(0, rng) == 0
    state.x_gate(0)
    assert state.measure_z(0, rng) == 1
    state.h(1)
    assert state.measure_x(1, rng) == 0
    state.z_gate(1)
    assert state.measure_x(1, rng) == 1


def test_random_measurement_statistics():
    rng = stream(5)
    outcomes = []
    for _ in range(400):
        state = StabilizerState(1)
        state.h(0)
        outcomes.append(state.measure_z(0, rng))
    mean = np.mean(outcomes)
    assert abs(mean - 0.5) < 3 * 0.5 / np.sqrt(400)


def test_joint_pauli_measurement():
    rng = stream(6)
    state = StabilizerState(2)
    xx = PauliOperator.from_string("XX")
    outcome = state.measure_pauli(xx, rng)
    assert state.expectation(xx) == (1 if outcome == 0 else -1)
    # |00> is a ZZ=+1 eigenstate; XX measurement must preserve that
    assert state.expectation(PauliOperator.from_string("ZZ")) == 1
    assert state.measure_pauli(xx, rng) == outcome


def test_argument_validation():
    state = StabilizerState(2)
    rng = stream(7)
    with pytest.raises(IndexError):
        state.h(2)
    with pytest.raises(ValueError):
        state.cnot(1, 1)
    with pytest.raises(ValueError):
        state.bell_measure(0, 0, rng)
    with pytest.raises(ValueError):
        state.apply_pauli(PauliOperator.identity(3))
    with pytest.raises(ValueError):
        state.apply_gate(("T", 0))
    with pytest.raises(ValueError):
        StabilizerState(0)
