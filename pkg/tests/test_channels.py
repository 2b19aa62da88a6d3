"""Tests for the photon-number channel kernels and classical channel."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import binom, nbinom

from gauss_purify.channels import (
    AMPLIFY,
    ATTENUATE,
    ClassicalGaussian,
    amplify_kernel,
    ancilla_fock_kernel,
    ancilla_mixture_kernel,
    attenuate_kernel,
    build_kernel,
    channel_s_tilde,
    classical_channel,
    gain_matrix,
    gaussian_noise_topup,
    normalize_kind,
    thinning_matrix,
)
from gauss_purify.fock import l1_distance, thermal_state, vacuum_state

att_ks = st.floats(min_value=0.05, max_value=0.95)
amp_ks = st.floats(min_value=1.05, max_value=3.0)


def test_normalize_kind():
    assert normalize_kind("att") == ATTENUATE
    assert normalize_kind("Amplify") == AMPLIFY
    with pytest.raises(ValueError):
        normalize_kind("squeeze")


def test_regime_bounds_enforced():
    with pytest.raises(ValueError):
        thinning_matrix(1.0, 5)
    with pytest.raises(ValueError):
        gain_matrix(1.0, 5, 10)
    with pytest.raises(ValueError):
        channel_s_tilde("att", 1.0, 0.5)


def test_thinning_matches_binomial_pmf():
    # column n is Binomial(n, k^2) thinning
    k = 0.6
    mat = thinning_matrix(k, 30)
    for n in (0, 1, 7, 30):
        want = binom.pmf(np.arange(31), n, k * k)
        assert np.max(np.abs(mat[:, n] - want)) < 1e-13


def test_gain_matches_negative_binomial_pmf():
    k = 1.4
    G = k * k
    mat = gain_matrix(k, 20, 120)
    m = np.arange(121)
    for n in (0, 3, 20):
        # m - n extra photons, n + 1 successes at probability 1/G
        want = np.zeros(121)
        want[n:] = nbinom.pmf(m[n:] - n, n + 1, 1.0 / G)
        assert np.max(np.abs(mat[:, n] - want)) < 1e-13


@given(k=att_ks)
@settings(max_examples=40)
def test_thinning_columns_stochastic(k):
    mat = thinning_matrix(k, 40)
    assert np.max(np.abs(mat.sum(axis=0) - 1.0)) < 1e-12


@given(k1=att_ks, k2=att_ks)
@settings(max_examples=30)
def test_thinning_semigroup(k1, k2):
    # thinning by k1 then k2 equals thinning by k1 k2
    a = thinning_matrix(k1, 25)
    b = thinning_matrix(k2, 25)
    c = thinning_matrix(k1 * k2, 25)
    assert np.max(np.abs(b @ a - c)) < 1e-12


def test_attenuate_thermal_closure():
    k, s1 = 0.7, 0.6
    st_val = channel_s_tilde(ATTENUATE, s1, k)
    out = attenuate_kernel(k, thermal_state(s1, 300))
    target = thermal_state(st_val, 300)
    # closure is exact; only the input truncation separates the two
    assert l1_distance(out, target).value < 5e-12


def test_attenuate_s_tilde_halves_worked_value():
    assert abs(channel_s_tilde(ATTENUATE, 0.8, 0.5) - 0.5) < 1e-15


def test_amplify_thermal_closure():
    k, s1 = 1.5, 0.3
    st_val = channel_s_tilde(AMPLIFY, s1, k)
    out = amplify_kernel(k, thermal_state(s1, 250))
    target = thermal_state(st_val, out.cutoff)
    assert l1_distance(out, target).value < 5e-12


def test_amplify_vacuum_gives_thermal():
    # gain 2 on vacuum: geometric with s = 1 - 1/G = 0.5
    out = amplify_kernel(math.sqrt(2.0), vacuum_state())
    target = thermal_state(0.5, out.cutoff)
    assert np.max(np.abs(out.probs - target.probs)) < 1e-14


def test_amplify_worked_s_tilde():
    assert abs(channel_s_tilde(AMPLIFY, 0.4, math.sqrt(2.0)) - 0.7) < 1e-15


def test_amplify_auto_cutoff_certifies_loss():
    out = amplify_kernel(2.0, thermal_state(0.5, 80), tail_target=1e-14)
    src_tail = thermal_state(0.5, 80).tail_bound
    assert out.tail_bound - src_tail <= 1e-13


def test_amplify_pinned_cutoff_measures_loss():
    out = amplify_kernel(2.0, vacuum_state(), out_cutoff=10)
    # geometric tail of s = 0.75 beyond 10
    assert abs(out.tail_bound - 0.75**11) < 1e-12


@given(s1=st.floats(min_value=0.0, max_value=0.9), k=att_ks)
@settings(max_examples=50)
def test_s_tilde_attenuation_shrinks(s1, k):
    st_val = channel_s_tilde(ATTENUATE, s1, k)
    assert 0.0 <= st_val <= s1 + 1e-15


@given(s1=st.floats(min_value=0.0, max_value=0.9), k=amp_ks)
@settings(max_examples=50)
def test_s_tilde_amplification_grows(s1, k):
    st_val = channel_s_tilde(AMPLIFY, s1, k)
    assert s1 - 1e-15 <= st_val < 1.0


def test_build_kernel_shapes():
    ker = build_kernel(ATTENUATE, 0.5, 20)
    assert ker.matrix.shape == (21, 21)
    assert ker.out_cutoff == 20
    ker2 = build_kernel(AMPLIFY, 1.3, 20)
    assert ker2.matrix.shape == (ker2.out_cutoff + 1, 21)
    assert np.max(ker2.column_tails()) < 1e-12


def test_ancilla_fock_kernel_is_negative_binomial():
    # transformed-picture weights: NB(kappa+1, 1-g) at l, shifted by kappa
    # for attenuation and unshifted for amplification
    for kind, k, shift_by_kappa in ((ATTENUATE, 0.6, True), (AMPLIFY, 1.4, False)):
        g = channel_s_tilde(kind, 0.5, k)
        for kappa in (0, 1, 4):
            out = ancilla_fock_kernel(kind, k, kappa, 0.5)
            shift = kappa if shift_by_kappa else 0
            l = np.arange(out.cutoff + 1 - shift)
            want = nbinom.pmf(l, kappa + 1, 1.0 - g)
            assert np.max(np.abs(out.probs[shift:] - want)) < 1e-13
            assert not out.probs[:shift].any()


def test_ancilla_vacuum_matches_thermal_output():
    out = ancilla_fock_kernel(ATTENUATE, 0.6, 0, 0.5, cutoff=120)
    st_val = channel_s_tilde(ATTENUATE, 0.5, 0.6)
    assert np.max(np.abs(out.probs - thermal_state(st_val, 120).probs)) < 1e-15


def test_ancilla_mixture_is_convex_combination():
    weights = [0.5, 0.3, 0.2]
    mix = ancilla_mixture_kernel(AMPLIFY, 1.3, weights, 0.4, cutoff=200)
    parts = [ancilla_fock_kernel(AMPLIFY, 1.3, i, 0.4, cutoff=200) for i in range(3)]
    want = sum(w * p.probs for w, p in zip(weights, parts))
    assert np.max(np.abs(mix.probs - want)) < 1e-15
    with pytest.raises(ValueError):
        ancilla_mixture_kernel(AMPLIFY, 1.3, [0.7, 0.7], 0.4)


def test_noise_topup_worked_values():
    assert abs(gaussian_noise_topup(0.25, 0.5) - 2.0 / 3.0) < 1e-15
    assert gaussian_noise_topup(0.0, 0.5) == 1.0
    assert gaussian_noise_topup(0.3, 0.3) == 0.0
    with pytest.raises(ValueError):
        gaussian_noise_topup(0.6, 0.5)


def test_classical_channel_regimes():
    # below threshold the output variance hits the target exactly
    out = classical_channel(0.8, 1.0, 1.0, ClassicalGaussian(2.0, 1.0))
    assert out.mean == 0.8 * 2.0
    assert abs(out.variance - 1.0) < 1e-15
    # above threshold no noise is added
    out2 = classical_channel(1.5, 1.0, 1.0, ClassicalGaussian(2.0, 1.0))
    assert abs(out2.variance - 1.5**2) < 1e-15


def test_thinning_single_photon_split():
    mat = thinning_matrix(0.5, 1)
    # retention probability is k^2 = 0.25
    assert np.array_equal(mat[:, 0], [1.0, 0.0])
    assert np.allclose(mat[:, 1], [0.75, 0.25], rtol=0, atol=1e-15)


def test_attenuate_worked_thermal_pair():
    out = attenuate_kernel(0.5, thermal_state(0.8, 160))
    want = thermal_state(0.5, 160)
    assert np.max(np.abs(out.probs - want.probs)) <= 1e-12


def test_amplify_worked_thermal_pair():
    out = amplify_kernel(math.sqrt(2.0), thermal_state(0.4, 80))
    want = thermal_state(0.7, out.cutoff)
    assert np.max(np.abs(out.probs - want.probs)) <= 1e-12


def test_gain_matrix_unit_limit_first_order():
    # the k -> 1+ identity limit is approached at first order: the
    # diagonal deficit is 1 - G^-(n+1) ~ 2 (n+1) eps, so the worst
    # entry deviation shrinks linearly with eps
    cutoff = 30
    eye = np.eye(cutoff + 1)
    dev = {
        eps: float(np.max(np.abs(gain_matrix(1.0 + eps, cutoff, cutoff) - eye)))
        for eps in (1e-4, 1e-5, 1e-6)
    }
    assert dev[1e-6] <= 3 * (cutoff + 1) * 2e-6
    assert dev[1e-6] < dev[1e-5] < dev[1e-4]
    assert dev[1e-5] / dev[1e-6] == pytest.approx(10.0, rel=0.05)


def test_ancilla_level_one_worked_weights():
    # att with s1 = 0.5, k = 0.5: g = 0.2, weights 0.64 * 0.2^l (l+1)
    # sitting at photon number l + 1
    out = ancilla_fock_kernel(ATTENUATE, 0.5, 1, 0.5, cutoff=50)
    l = np.arange(50)
    want = np.zeros(51)
    want[1:] = 0.64 * 0.2**l * (l + 1)
    assert out.probs[0] == 0.0
    assert np.max(np.abs(out.probs - want)) <= 1e-13
    assert math.fsum(out.probs) == pytest.approx(1.0, abs=1e-13)


def test_classical_channel_worked_examples():
    low = classical_channel(0.5, 1.0, 1.0, ClassicalGaussian(1.3, 1.0))
    assert low.mean == 0.65
    assert low.variance == 1.0
    same = classical_channel(1.0, 0.7, 0.7, ClassicalGaussian(0.3, 0.7))
    assert same.mean == 0.3
    assert same.variance == 0.7
    high = classical_channel(math.sqrt(2.0), 1.0, 1.0, ClassicalGaussian(0.0, 1.0))
    assert high.mean == 0.0
    assert high.variance == pytest.approx(2.0, abs=1e-15)
