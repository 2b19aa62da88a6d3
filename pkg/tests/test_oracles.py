"""Tests for the simulation oracles and the self-check harness.

The heavy cross-validation (large cutoffs, dense grids) lives in the
verification suite; here each oracle is exercised once at a small size
so defects localize quickly.
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from gauss_purify.channels import (
    AMPLIFY,
    ATTENUATE,
    amplify_kernel,
    attenuate_kernel,
    channel_s_tilde,
)
from gauss_purify.fock import number_state, thermal_state, vacuum_state
from gauss_purify.oracles import (
    AncillaCandidate,
    SUITE_NAMES,
    ancilla_optimality_search,
    case4_risk_closed,
    check_stochastic_ordering,
    kraus_operators,
    simulate_channel,
    verify_covariance,
    verify_noise_topup,
)
from gauss_purify.oracles import _check_threshold_exactness, _jsonable, _report
from gauss_purify import risk as risk_mod
from gauss_purify.risk import case4_risk, quantum_minimax_risk


def test_simulated_attenuation_matches_kernel():
    src = thermal_state(0.5, 40)
    sim = simulate_channel(ATTENUATE, 0.6, src, AncillaCandidate.vacuum(), 40)
    ker = attenuate_kernel(0.6, src)
    assert np.max(np.abs(sim.probs - ker.probs)) < 1e-12


def test_simulated_amplification_matches_kernel():
    src = thermal_state(0.4, 30)
    sim = simulate_channel(AMPLIFY, 1.3, src, AncillaCandidate.vacuum(), 120)
    ker = amplify_kernel(1.3, src, out_cutoff=120)
    assert np.max(np.abs(sim.probs - ker.probs)) < 1e-12


def test_simulated_identity_at_unit_k():
    src = thermal_state(0.5, 25)
    sim = simulate_channel(ATTENUATE, 1.0, src, AncillaCandidate.vacuum(), 25)
    assert np.max(np.abs(sim.probs - src.probs)) == 0.0


def test_simulated_amplifier_vacuum_closure():
    sim = simulate_channel(AMPLIFY, math.sqrt(2.0), vacuum_state(), AncillaCandidate.vacuum(), 150)
    want = thermal_state(0.5, 150).probs
    assert np.max(np.abs(sim.probs - want)) < 1e-13


def test_fock_ancilla_changes_output():
    src = number_state(2, cutoff=10)
    vac = simulate_channel(ATTENUATE, 0.7, src, AncillaCandidate.vacuum(), 10)
    one = simulate_channel(ATTENUATE, 0.7, src, AncillaCandidate.fock(1), 11)
    assert np.max(np.abs(vac.padded(11) - one.probs)) > 1e-3


def test_kraus_operators_resolve_identity():
    ops = kraus_operators(ATTENUATE, 0.6, 20, 20)
    total = sum(B.T @ B for B in ops)
    assert np.max(np.abs(total - np.eye(21))) < 1e-12


def test_stochastic_ordering_small():
    for kind, k in ((ATTENUATE, 0.7), (AMPLIFY, 1.4)):
        rep = check_stochastic_ordering(kind, k, 0.5, kappa_max=4)
        assert rep.ok, rep.as_dict()
        assert rep.worst_margin >= -1e-12


def test_vacuum_optimality_small_search():
    rep = ancilla_optimality_search(ATTENUATE, 0.6, 0.8, 0.4, max_level=3, samples=300)
    assert rep.ok
    assert rep.margin >= -1e-9
    # vacuum is a simplex vertex, so the best candidate never loses to it
    assert rep.best_risk <= rep.vacuum_risk + 1e-15


def test_noise_topup_small_sample():
    rep = verify_noise_topup(0.25, 0.5, samples=20_000)
    assert rep.exact_max_err <= 1e-10
    assert rep.mc_l1_err <= rep.mc_tol
    assert abs(rep.v - 2.0 / 3.0) < 1e-15


def test_noise_topup_degenerate():
    rep = verify_noise_topup(0.3, 0.3, samples=1000)
    assert rep.v == 0.0
    assert rep.ok


def test_covariance_single_displacement():
    rep = verify_covariance(ATTENUATE, 0.5, [0.8], in_cutoff=36)
    assert rep.ok
    assert rep.max_trace_norm <= 1e-6
    with pytest.raises(ValueError):
        verify_covariance(ATTENUATE, 0.5, [2.5])


def test_case4_closed_form_agrees_with_quadrature():
    args = (0.7, 0.3, 1.4, 0.8)
    assert abs(case4_risk_closed(*args) - case4_risk(*args, abs_tol=1e-10)) < 1e-8


def test_suite_registry():
    assert len(SUITE_NAMES) == 20
    assert len(set(SUITE_NAMES)) == 20
    for name in ("kernel_vs_unitary", "vacuum_optimality", "case_continuity"):
        assert name in SUITE_NAMES


def test_report_payloads_serialize():
    raw = _report(
        "demo",
        True,
        scalar=np.float64(1.5),
        vector=np.arange(3),
        cplx=1 + 2j,
        inf=math.inf,
    )
    text = json.dumps(raw, sort_keys=True)
    assert "demo" in text
    assert _jsonable(np.float64(2.0)) == 2.0


def test_ordering_holds_at_half_retention():
    rep = check_stochastic_ordering(ATTENUATE, 0.5, 0.5, 10)
    assert rep.ok
    assert rep.worst_margin >= -1e-12
    assert rep.witness is None


def test_optimality_search_amplifier_above_threshold():
    rep = ancilla_optimality_search(AMPLIFY, 1.9, 0.4, 0.8, max_level=3, samples=300, seed=7)
    assert rep.ok
    assert rep.vacuum_risk == pytest.approx(
        quantum_minimax_risk(0.4, 0.8, 1.9, AMPLIFY), abs=1e-9
    )


def test_optimality_search_reports_counterexample_below_threshold():
    # below the amplifier threshold sqrt(3) the vacuum baseline is not
    # optimal against the raw channel output: hotter ancillas land
    # closer to the hot target, and the search must say so honestly
    rep = ancilla_optimality_search(AMPLIFY, 1.5, 0.4, 0.8, max_level=4, samples=200, seed=11)
    assert not rep.ok
    assert rep.margin < -1e-2
    assert rep.best_risk < rep.vacuum_risk
    assert rep.best_weights[0] < 1.0


def test_covariance_amplifier_output_displacement():
    rep = verify_covariance(AMPLIFY, math.sqrt(2.0), [1.0], s1=0.4, in_cutoff=40)
    assert rep.ok
    # output displacement of the alpha = 1 input is k alpha = sqrt(2)
    assert rep.gain_err <= 1e-8


def test_topup_fills_vacuum_to_thermal():
    rep = verify_noise_topup(0.0, 0.5, samples=20_000, seed=3)
    assert rep.ok
    assert rep.v == 1.0


def test_sabotaged_threshold_is_detected(monkeypatch):
    # mutation check: a k0 formula off by 1e-3 must fail the
    # threshold-exactness verification
    true_fn = risk_mod.quantum_threshold

    def skewed(kind, s1, s2):
        k0 = true_fn(kind, s1, s2)
        return k0 * (1.0 - 1e-3) if k0 <= 1.0 else k0 * (1.0 + 1e-3)

    monkeypatch.setattr(risk_mod, "quantum_threshold", skewed)
    report = _check_threshold_exactness(np.random.default_rng(5), fast=True)
    assert report["ok"] is False
    assert report["worst_s_tilde_err"] > 1e-6
