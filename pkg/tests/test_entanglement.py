import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weakconc import entanglement as ent
from weakconc import hilbert, oracles
from weakconc.errors import NotNormalized, UnphysicalSqueezing, ValidationError
from weakconc.hilbert import Cutoff

S_TMSV_05 = 1.0817041659455104852   # bits, lambda = 0.5, from the untruncated geometric series


def spec(lam, tol=1e-16):
    return ent.schmidt_spectrum(hilbert.tmsv(lam, hilbert.tmsv_cutoff(lam, tol)))


def test_tmsv_entropy_frozen():
    s = spec(0.5)
    assert ent.von_neumann_entropy(s) == pytest.approx(S_TMSV_05, abs=1e-12)
    assert ent.purity(s) == pytest.approx(0.6, abs=1e-14)
    assert ent.von_neumann_entropy(s, base=math.e) == pytest.approx(S_TMSV_05 * math.log(2), abs=1e-12)


def test_majorization_examples():
    c = spec(0.5)
    assert ent.majorizes(c, c)
    assert ent.majorizes(spec(0.55), c)
    assert not ent.majorizes(c, spec(0.55))
    pure = ent.SchmidtSpectrum.from_probs([1.0])
    mixed = ent.SchmidtSpectrum.from_probs([0.5, 0.5])
    assert not ent.majorizes(pure, mixed)
    assert ent.majorizes(mixed, pure)


def test_mean_photon_number():
    assert ent.mean_photon_number(0.0) == 0.0
    assert ent.mean_photon_number(0.5) == pytest.approx(2 / 3)
    with pytest.raises(UnphysicalSqueezing):
        ent.mean_photon_number(1.0)
    st_ = hilbert.tmsv(0.5, hilbert.tmsv_cutoff(0.5, 1e-18))
    assert ent.mean_photons(st_) == pytest.approx(2 / 3, abs=1e-12)


def test_spectrum_validation():
    with pytest.raises(ValidationError):
        ent.SchmidtSpectrum(np.array([0.4, 0.6]))
    with pytest.raises(ValidationError):
        ent.SchmidtSpectrum(np.array([1.1, -0.1]))
    with pytest.raises(NotNormalized):
        ent.SchmidtSpectrum(np.array([0.6, 0.3]))
    with pytest.raises(NotNormalized):
        ent.schmidt_spectrum(hilbert.SchmidtDiagonalState(np.array([1.0, 1.0]), Cutoff(1), normalized=False))


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 30))
def test_schur_concavity_on_random_pairs(seed, size):
    d, c = oracles.random_majorized_pair(np.random.default_rng(seed), size)
    sd, sc = ent.SchmidtSpectrum.from_probs(d / d.sum()), ent.SchmidtSpectrum.from_probs(c / c.sum())
    assert ent.majorizes(sd, sc)
    assert ent.von_neumann_entropy(sd) >= ent.von_neumann_entropy(sc) - 1e-9
    assert ent.purity(sd) <= ent.purity(sc) + 1e-9


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 25), st.integers(1, 25))
def test_head_sums_agree_with_tail_sums(seed, n1, n2):
    rng = np.random.default_rng(seed)
    d, c = rng.dirichlet(np.ones(n1)), rng.dirichlet(np.ones(n2))
    fast = ent.majorizes(ent.SchmidtSpectrum.from_probs(d), ent.SchmidtSpectrum.from_probs(c))
    assert fast == oracles.majorized_by_tail_sums(d, c)


@given(st.floats(0.05, 0.9), st.floats(0.05, 0.9))
def test_tmsv_order_is_monotone_in_lambda(l1, l2):
    lo, hi = sorted((l1, l2))
    assert ent.majorizes(spec(hi, 1e-14), spec(lo, 1e-14))
    v = ent.compare(hilbert.tmsv(lo, hilbert.tmsv_cutoff(hi, 1e-14)), hilbert.tmsv(hi, hilbert.tmsv_cutoff(hi, 1e-14)))
    assert v.entropy_gain >= -1e-12
    assert v.majorized
