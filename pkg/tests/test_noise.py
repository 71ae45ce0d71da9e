import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qnetcode.noise import (
    LABEL_XZ,
    LABELS,
    BellDiagonalState,
    NoiseModel,
    effective_error_rate,
    sample_error,
    werner,
)
from qnetcode.rng import stream


def test_spec_round_trip():
    for spec in ("none", "bit_flip:0.1", "phase_flip:0.25", "depolarizing:0.055", "independent_xz:0.01,0.02"):
        model = NoiseModel.from_spec(spec)
        assert NoiseModel.from_spec(model.to_spec()) == model


def test_from_spec_rejects_malformed():
    for bad in ("unknown:0.1", "bit_flip", "bit_flip:0.1,0.2", "independent_xz:0.1", "depolarizing:2.0"):
        with pytest.raises(ValueError):
            NoiseModel.from_spec(bad)


def test_variant_and_probability_validation():
    with pytest.raises(ValueError):
        NoiseModel("gaussian", 0.1)
    with pytest.raises(ValueError):
        NoiseModel.bit_flip(-0.1)
    with pytest.raises(ValueError):
        NoiseModel.depolarizing(1.5)


def test_flip_probability_marginals():
    assert NoiseModel.none().flip_probability() == 0.0
    assert NoiseModel.phase_flip(0.3).flip_probability() == 0.0
    assert NoiseModel.bit_flip(0.3).flip_probability() == 0.3
    assert NoiseModel.depolarizing(0.3).flip_probability() == pytest.approx(0.2)
    assert NoiseModel.independent_xz(0.1, 0.4).flip_probability() == 0.1


def test_sample_error_extremes():
    rng = stream(0)
    assert sample_error(NoiseModel.none(), 5, rng).is_identity()
    p = sample_error(NoiseModel.bit_flip(1.0), 5, rng)
    assert p.x_bits.all() and not p.z_bits.any()
    p = sample_error(NoiseModel.phase_flip(1.0), 5, rng)
    assert p.z_bits.all() and not p.x_bits.any()
    with pytest.raises(ValueError):
        sample_error(NoiseModel.none(), 0, rng)


def test_depolarizing_label_distribution():
    """X, Y, Z each occur with probability p/3 (3-sigma check)."""
    p, n, trials = 0.3, 200, 200
    rng = stream(42)
    counts = np.zeros(4, dtype=np.int64)
    for _ in range(trials):
        err = sample_error(NoiseModel.depolarizing(p), n, rng)
        for x, z in zip(err.x_bits, err.z_bits):
            counts[{(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}[(int(x), int(z))]] += 1
    total = counts.sum()
    for label_p, c in zip((1 - p, p / 3, p / 3, p / 3), counts):
        sigma = math.sqrt(label_p * (1 - label_p) * total)
        assert abs(c - label_p * total) < 3 * sigma + 1


def test_effective_error_rate_values():
    assert effective_error_rate(0.05, 0.001) == pytest.approx(0.055, abs=1e-15)
    assert effective_error_rate(0.0, 0.0) == 0.0
    assert effective_error_rate(0.9, 0.1) == 1.0  # clamped
    with pytest.raises(ValueError):
        effective_error_rate(-0.1, 0.0)


@given(st.floats(0, 1), st.floats(0, 1))
def test_effective_error_rate_bounds(p_c, p_g):
    rate = effective_error_rate(p_c, p_g)
    assert 0.0 <= rate <= 1.0
    assert rate >= min(p_c, 1.0)


def test_bell_diagonal_validation():
    with pytest.raises(ValueError):
        BellDiagonalState(np.array([0.5, 0.5, 0.5, -0.5]))
    with pytest.raises(ValueError):
        BellDiagonalState(np.array([0.5, 0.5, 0.5]))
    with pytest.raises(ValueError):
        BellDiagonalState(np.array([0.5, 0.5, 0.5, 0.5]))


def test_werner_state():
    w = werner(0.9)
    assert w.fidelity == pytest.approx(0.9)
    assert np.allclose(w.probs[1:], (1 - 0.9) / 3)
    assert BellDiagonalState.perfect().fidelity == 1.0
    assert len(LABELS) == len(LABEL_XZ) == 4


def test_sample_label_distribution():
    w = werner(0.7)
    rng = stream(7)
    draws = np.bincount([w.sample_label(rng) for _ in range(20000)], minlength=4)
    for target, c in zip(w.probs, draws):
        sigma = math.sqrt(target * (1 - target) * 20000)
        assert abs(c - target * 20000) < 3 * sigma + 1


def test_rng_streams_are_independent_and_stable():
    a = stream(1, 2, 3).integers(0, 2 ** 32, 4)
    b = stream(1, 2, 3).integers(0, 2 ** 32, 4)
    c = stream(1, 2, 4).integers(0, 2 ** 32, 4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
