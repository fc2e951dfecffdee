import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handwriting_dmp.kernels import activations, build_bank, forcing_value


def test_two_kernel_bank():
    bank = build_bank(2, 1.0, truncated=True)
    np.testing.assert_allclose(bank.centers, [0.25, 0.75])
    np.testing.assert_allclose(bank.half_widths, [0.25, 0.25])


def test_single_kernel_centered():
    bank = build_bank(1)
    np.testing.assert_allclose(bank.centers, [0.5])


def test_unit_width_supports_abut():
    bank = build_bank(10, 1.0)
    c, th = bank.centers, bank.half_widths
    np.testing.assert_allclose(c[1:] - th[1:], c[:-1] + th[:-1], rtol=0, atol=1e-12)
    assert c[0] - th[0] == pytest.approx(0.0, abs=1e-12)
    assert c[-1] + th[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(c) > 0)


@pytest.mark.parametrize("n,w", [(0, 1.0), (3, 0.0), (3, -1.0)])
def test_bad_bank(n, w):
    with pytest.raises(ValueError):
        build_bank(n, w)


def test_peak_and_cutoff():
    bank = build_bank(5, 1.0)
    psi = activations(bank, bank.centers[2])
    assert psi[2] == 1.0
    beyond = bank.centers[2] + bank.half_widths[2] + 1e-6
    assert activations(bank, beyond)[2] == 0.0


def test_edge_value_is_one_half():
    bank = build_bank(7, 1.5)
    theta = bank.half_widths[3]
    h = 2 * math.log(2) / theta**2
    edge = bank.centers[3] + theta
    expected = math.exp(-h / 2 * theta**2)
    assert expected == pytest.approx(0.5, abs=1e-12)
    assert activations(bank, edge)[3] == pytest.approx(0.5, abs=1e-12)


def test_truncated_matches_untruncated_inside_support(rng):
    bank = build_bank(8, 2.0, truncated=True)
    x = rng.uniform(0, 1, 400)
    psi = activations(bank, x)
    d = x[:, None] - bank.centers
    gauss = np.exp(-0.5 * bank.shapes * d**2)
    inside = np.abs(d) <= bank.half_widths
    np.testing.assert_array_equal(psi[inside], gauss[inside])
    assert np.all(psi[~inside] == 0.0)


def test_full_gaussian_uses_unhalved_exponent(rng):
    bank = build_bank(6, 1.0, truncated=False)
    x = rng.uniform(0, 1, 50)
    expected = np.exp(-bank.shapes * (x[:, None] - bank.centers) ** 2)
    np.testing.assert_allclose(activations(bank, x), expected, rtol=1e-15)
    assert np.all(activations(bank, x) > 0)


@pytest.mark.parametrize("bad", [-0.01, 1.01, float("nan")])
def test_phase_outside_unit_interval_is_rejected(bad):
    with pytest.raises(ValueError):
        activations(build_bank(3), bad)


@pytest.mark.parametrize("n", [2, 5, 33])
@pytest.mark.parametrize("w", [1.0, 1.7, 4.0])
def test_full_coverage_for_wide_kernels(n, w):
    x = np.linspace(0, 1, 5001)
    assert np.all(activations(build_bank(n, w), x).sum(axis=1) > 0)


def test_gaps_for_narrow_kernels():
    x = np.linspace(0, 1, 5001)
    assert np.any(activations(build_bank(10, 2 / 3), x).sum(axis=1) == 0)


def test_constant_weights_give_w_times_x():
    bank = build_bank(10, 1.0)
    assert forcing_value(bank, np.full(10, 3.0), 0.42) == pytest.approx(3.0 * 0.42, abs=1e-14)


def test_gap_gives_zero_forcing():
    bank = build_bank(4, 0.2)
    gap = 0.25  # cell boundary, far from every narrow support
    assert activations(bank, gap).sum() == 0.0
    assert forcing_value(bank, np.arange(1.0, 5.0), gap) == 0.0


def test_forcing_matches_naive_sum(rng):
    for _ in range(20):
        n = int(rng.integers(1, 30))
        bank = build_bank(n, float(rng.uniform(0.5, 5)), truncated=bool(rng.integers(2)))
        w = rng.normal(size=n)
        x = float(rng.uniform(0, 1))
        num = den = 0.0
        for i in range(n):
            d = x - bank.centers[i]
            if bank.truncated:
                psi = math.exp(-bank.shapes[i] / 2 * d * d) if abs(d) <= bank.half_widths[i] else 0.0
            else:
                psi = math.exp(-bank.shapes[i] * d * d)
            num += psi * w[i]
            den += psi
        expected = num / den * x if den > 0 else 0.0
        assert forcing_value(bank, w, x) == pytest.approx(expected, abs=1e-12)


def test_weight_length_mismatch():
    with pytest.raises(ValueError):
        forcing_value(build_bank(4), np.ones(3), 0.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.floats(0.3, 8), st.floats(0, 1), st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_forcing_homogeneous_and_zero_at_origin(n, w, x, k, seed):
    bank = build_bank(n, w)
    weights = np.random.default_rng(seed).normal(size=n)
    assert forcing_value(bank, weights, 0.0) == 0.0
    assert forcing_value(bank, k * weights, x) == pytest.approx(k * forcing_value(bank, weights, x), abs=1e-9)
