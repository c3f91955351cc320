import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from weakconc import analytic, hilbert, oracles
from weakconc.errors import CutoffTooSmall, NotNormalized, UnphysicalSqueezing, ValidationError
from weakconc.hilbert import Cutoff

# Frozen from 50-digit mpmath evaluations of the defining series.
COH_OVERLAP_08_05 = 0.73621001419938480246 - 0.26574651300996913839j   # <0.5 e^{i pi/3} | 0.8>
PSI_07 = {0: 0.5879093724421046224, 5: 0.32729676349851068668, 30: -0.1945395635670879757}
SQ_C4 = 0.1622183453722416962j   # <4|zeta(r=0.6, phi=pi/4)>


def test_cutoff_validation():
    assert Cutoff(5).dim == 6
    for bad in (-1, 1.5, True):
        with pytest.raises(ValidationError):
            Cutoff(bad)
    with pytest.raises(ValidationError):
        Cutoff(5, tail_tol=0.0)


def test_coherent_overlap_frozen():
    cut = Cutoff(60, 1e-18)
    beta = 0.5 * cmath.exp(1j * math.pi / 3)
    ov = hilbert.overlap(hilbert.Normalizable(hilbert.coherent_fock(beta, cut)), hilbert.coherent_fock(0.8, cut))
    assert abs(ov - COH_OVERLAP_08_05) < 1e-14
    assert abs(analytic.coherent_overlap(beta, 0.8) - COH_OVERLAP_08_05) < 1e-15


@pytest.mark.parametrize("n", sorted(PSI_07))
def test_hermite_functions_frozen(n):
    assert hilbert.hermite_functions(0.7, 40)[n] == pytest.approx(PSI_07[n], abs=1e-14)
    assert oracles.hermite_function_direct(0.7, n) == pytest.approx(PSI_07[n], abs=1e-13)


def test_squeezed_amplitude_frozen():
    v = hilbert.squeezed_vacuum_fock(0.6, math.pi / 4, Cutoff(80, 1e-18))
    assert abs(v.amps[4] - SQ_C4) < 1e-15
    assert np.all(v.amps[1::2] == 0)


@given(st.floats(-6, 6), st.integers(0, 60))
def test_hermite_recurrence_matches_direct(x, n):
    rec = hilbert.hermite_functions(x, 60)[n]
    assert rec == pytest.approx(oracles.hermite_function_direct(x, n), abs=1e-10)


@given(st.floats(-8, 8))
def test_hermite_functions_bounded(x):
    # |psi_n(x)| <= pi^{-1/4} for every n and x
    assert np.all(np.abs(hilbert.hermite_functions(x, 150)) <= math.pi ** -0.25 + 1e-12)


@given(st.floats(0.05, 3.0), st.floats(0, 2 * math.pi))
def test_coherent_norm_and_tail(mag, phi):
    alpha = mag * cmath.exp(1j * phi)
    v = hilbert.coherent_fock(alpha, hilbert.fit_cutoff(lambda c: hilbert.coherent_fock(alpha, c), 1e-14))
    assert v.tail_mass <= 1e-14
    assert abs(v.norm ** 2 + v.tail_mass - 1) < 1e-12


@given(st.floats(0, 1.2), st.floats(-math.pi, math.pi))
def test_squeezed_norm_and_tail(r, phi):
    v = hilbert.squeezed_vacuum_fock(r, phi, hilbert.fit_cutoff(lambda c: hilbert.squeezed_vacuum_fock(r, phi, c), 1e-12))
    assert abs(v.norm ** 2 + v.tail_mass - 1) < 1e-11


def test_tail_guard_raises():
    with pytest.raises(CutoffTooSmall):
        hilbert.coherent_fock(3.0, Cutoff(5, 1e-10))
    with pytest.raises(CutoffTooSmall):
        hilbert.tmsv(0.9, Cutoff(10, 1e-10))
    with pytest.raises(UnphysicalSqueezing):
        hilbert.tmsv(1.0, Cutoff(10))
    with pytest.raises(UnphysicalSqueezing):
        hilbert.tmsv_cutoff(1.2)


@given(st.floats(0.0, 0.95))
def test_tmsv_cutoff_meets_tolerance(lam):
    cut = hilbert.tmsv_cutoff(lam, 1e-12)
    s = hilbert.tmsv(lam, cut)
    assert abs(s.norm2 - 1) <= 1e-12
    assert np.all(np.diff(s.probs) <= 0)


def test_schmidt_state_normalisation_checked():
    with pytest.raises(NotNormalized):
        hilbert.SchmidtDiagonalState(np.array([0.5, 0.5]), Cutoff(1))
    s = hilbert.SchmidtDiagonalState(np.array([1.0, 1.0]), Cutoff(1), normalized=False).normalize()
    assert s.probs == pytest.approx([0.5, 0.5])


@given(st.floats(-3, 3), st.floats(0, 2 * math.pi), st.floats(0.1, 1.5))
def test_quadrature_overlap_conventions(x, phi, a):
    ket = hilbert.coherent_fock(a, Cutoff(40, 1e-14))
    for conv in hilbert.CONVENTIONS:
        num = hilbert.overlap(hilbert.QuadratureFunctional(x, phi, conv), ket)
        assert abs(num - analytic.quadrature_overlap(x, phi, a, conv)) < 1e-9
    # The two conventions are complex conjugates of each other for real alpha.
    std = analytic.quadrature_overlap(x, phi, a, hilbert.STANDARD)
    conj = analytic.quadrature_overlap(x, phi, a, hilbert.CONJUGATE)
    assert abs(std - conj.conjugate()) < 1e-12


def test_quadrature_density_integrates_to_one():
    ket = hilbert.coherent_fock(0.8, Cutoff(40, 1e-14))
    total, _ = integrate.quad(lambda x: abs(hilbert.overlap(hilbert.QuadratureFunctional(x, 0.9), ket)) ** 2,
                             -12, 12, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_custom_fock_and_specs_validate():
    with pytest.raises(ValidationError):
        hilbert.Coherent(0.0)
    with pytest.raises(UnphysicalSqueezing):
        hilbert.SqueezedVacuum(-0.1, 0.0)
    with pytest.raises(ValidationError):
        hilbert.QuadratureEigenstate(0.0, 0.0, "sideways")
    with pytest.raises(ValidationError):
        hilbert.FockVector(np.array([1.0, 1.0]), Cutoff(1))
    v = hilbert.FockVector(np.array([0.6, 0.8j]), Cutoff(1))
    assert v.padded(3).tolist() == [0.6, 0.8j, 0, 0]
