import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakconc import concentration as conc
from weakconc import entanglement as ent
from weakconc import hilbert, oracles
from weakconc.errors import (CutoffTooSmall, NotNormalized, UnphysicalOutput, UnphysicalSqueezing,
                             ValidationError)
from weakconc.hilbert import Coherent, Cutoff, QuadratureEigenstate, SqueezedVacuum

LAM, KAPPA = 0.5, 0.05
BETA_GOOD = 3 * math.pi / 2

# Frozen from a 50-digit evaluation of lambda^n exp(beta* alpha e^{-i kappa n}) with alpha=1, |beta|=1.
P_SUCCESS_40 = 0.1402428293564535705
S_OUT_COHERENT = 1.1746584771195696948
FIDELITY_COHERENT = 0.99999303025580094135
MEAN_PHOTONS_PRED = 0.76354830409606057193   # 2 l'^2 / (1 - l'^2), l' = 0.5 e^{0.05}


def cfg(pre=Coherent(1.0), post=Coherent(1.0, BETA_GOOD), lam=LAM, kappa=KAPPA, n=40, anc=40):
    return conc.ProtocolConfig(lam, kappa, pre, post, Cutoff(n), Cutoff(anc))


def test_coherent_baseline_frozen():
    out = conc.apply_protocol_exact(cfg())
    assert out.success_prob == pytest.approx(P_SUCCESS_40, abs=1e-14)
    res = conc.run(cfg(n=120, anc=60))
    assert res.verdict.entropy_out == pytest.approx(S_OUT_COHERENT, abs=1e-12)
    assert res.fidelity == pytest.approx(FIDELITY_COHERENT, abs=1e-12)
    assert res.success and res.verdict.more_entangled
    assert res.o_w == pytest.approx(1j, abs=1e-10)


def test_predicted_mean_photons_frozen():
    pred = conc.predicted_tmsv(LAM, KAPPA, 1j, hilbert.tmsv_cutoff(0.5 * math.exp(0.05), 1e-18))
    assert ent.mean_photons(pred) == pytest.approx(MEAN_PHOTONS_PRED, abs=1e-10)


@pytest.mark.parametrize("pre, post", [
    (Coherent(1.0), Coherent(1.0, BETA_GOOD)),
    (Coherent(0.8), QuadratureEigenstate(1.0, math.pi / 3)),
    (Coherent(0.8), SqueezedVacuum(0.6, math.pi / 4)),
    (SqueezedVacuum(0.3, 0.2), Coherent(0.7, 1.0)),
])
def test_filter_output_matches_tripartite(pre, post):
    c = cfg(pre, post, n=20, anc=40)
    out = conc.apply_protocol_exact(c)
    m, prob = oracles.tripartite_output(LAM, KAPPA, c.pre_ket, c.post_selector.row(40), 20)
    assert np.max(np.abs(np.diag(m) - out.state.coeffs)) < 1e-12
    assert np.max(np.abs(m - np.diag(np.diag(m)))) == 0
    assert prob == pytest.approx(out.success_prob, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 0.6), st.floats(0.01, 0.3), st.floats(0.2, 1.5), st.floats(0.2, 1.5), st.floats(0, 2 * math.pi))
def test_output_normalised_and_bounded(lam, kappa, a, b, phi):
    res = conc.run(cfg(Coherent(a), Coherent(b, phi), lam, kappa, n=40, anc=40))
    assert abs(res.exact_output.norm2 - 1) < 1e-12
    assert 0 < res.success_prob <= 1 + 1e-12
    assert res.fidelity is None or 0 <= res.fidelity <= 1


def test_zero_coupling_is_identity():
    c = cfg(kappa=0.0)
    out = conc.apply_protocol_exact(c)
    # identical up to the global phase <beta|alpha> / |<beta|alpha>|
    assert abs(np.vdot(c.input_state.coeffs, out.state.coeffs)) == pytest.approx(1.0, abs=1e-12)
    assert out.state.probs == pytest.approx(c.input_state.normalize().probs, abs=1e-15)
    assert conc.run(c).success is None


def test_windowed_probability_integrates_to_one_at_zero_coupling():
    c = cfg(Coherent(0.8), QuadratureEigenstate(0.4, 0.7), kappa=0.0, n=20, anc=30)
    assert conc.windowed_success_probability(c, 16.0, order=96) == pytest.approx(1.0, abs=1e-9)
    narrow = conc.windowed_success_probability(c, 1e-3)
    dens = conc.apply_protocol_exact(c).success_prob
    assert narrow == pytest.approx(1e-3 * dens, rel=1e-6)
    with pytest.raises(ValidationError):
        conc.windowed_success_probability(cfg(), 0.1)


def test_predicted_tmsv_regimes():
    assert conc.predicted_tmsv(0.5, 0.05, 0j, Cutoff(60)).probs == pytest.approx(
        hilbert.tmsv(0.5, Cutoff(60)).probs, abs=1e-15)
    # lambda^2 e^{2 kappa Im} = 1 exactly at Im = ln(4) / (2 kappa)
    edge = math.log(4) / (2 * 0.05)
    with pytest.raises(UnphysicalOutput):
        conc.predicted_tmsv(0.5, 0.05, 1j * edge, Cutoff(60))
    with pytest.raises(CutoffTooSmall):
        conc.predicted_tmsv(0.5, 0.05, 1j * (edge - 0.5), Cutoff(60))
    with pytest.raises(UnphysicalSqueezing):
        conc.predicted_tmsv(1.0, 0.05, 0j, Cutoff(60))


@given(st.floats(0.05, 0.9), st.floats(0.01, 0.3), st.floats(-5, 5), st.floats(-5, 5))
def test_lambda_prime_magnitude(lam, kappa, re, im):
    o_w = complex(re, im)
    q = lam * lam * math.exp(2 * kappa * im)
    if q >= 0.95:
        return
    cut = Cutoff(int(math.log(1e-14) / math.log(q)) + 2, 1e-12)
    pred = conc.predicted_tmsv(lam, kappa, o_w, cut)
    lp = pred.coeffs[1] / pred.coeffs[0]
    assert abs(abs(lp) - lam * math.exp(kappa * im)) < 1e-12
    assert cmath.phase(lp) == pytest.approx(cmath.phase(cmath.exp(-1j * kappa * re)), abs=1e-9)


def test_run_flags_unphysical_output():
    res = conc.run(cfg(Coherent(2.0), Coherent(2.0, BETA_GOOD), lam=0.9, kappa=0.5, n=200, anc=60))
    assert res.unphysical_output and res.predicted_output is None and res.fidelity is None
    assert any("predicted_output" in n for n in res.notes)


def test_residuals_vanish_for_zero_coupling_and_shrink_with_kappa():
    o_w = 1j
    r0 = conc.weakness_residuals(cfg(kappa=0.0), o_w)
    assert r0.max_abs < 1e-14
    prev = math.inf
    for k in (0.2, 0.1, 0.05, 0.025):
        r = conc.weakness_residuals(cfg(kappa=k, n=80), o_w).max_abs
        assert r < prev
        prev = r


def test_config_validation():
    with pytest.raises(UnphysicalSqueezing):
        cfg(lam=1.0)
    with pytest.raises(ValidationError):
        cfg(kappa=float("nan"))
    with pytest.raises(ValidationError):
        cfg(pre=QuadratureEigenstate(0.0, 0.0))
    with pytest.raises(CutoffTooSmall):
        conc.ProtocolConfig(0.5, 0.05, Coherent(3.0), Coherent(1.0), Cutoff(40), Cutoff(5))
    a = hilbert.tmsv(0.5, Cutoff(40))
    b = hilbert.SchmidtDiagonalState(np.ones(41), Cutoff(40), normalized=False)
    with pytest.raises(NotNormalized):
        conc.approximation_fidelity(a, b)
