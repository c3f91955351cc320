import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weakconc import analytic, hilbert, weak_values
from weakconc.errors import NearOrthogonalPostSelection, NonPositiveCoupling, UnsupportedScheme, ValidationError
from weakconc.hilbert import Cutoff, Normalizable, QuadratureFunctional

CUT = Cutoff(60, 1e-18)
alphas = st.floats(0.1, 1.8)
phases = st.floats(0, 2 * math.pi)


def coh(a):
    return hilbert.coherent_fock(a, CUT)


@given(alphas, st.floats(0.1, 1.8), phases)
def test_coherent_weak_value(a, b, phi):
    beta = b * cmath.exp(1j * phi)
    w = weak_values.weak_value_numeric(coh(a), Normalizable(coh(beta)))
    assert abs(w.value - a * beta.conjugate()) < 1e-8
    assert w.imag == pytest.approx(-a * b * math.sin(phi), abs=1e-8)


@given(alphas, st.floats(-2.5, 2.5), phases)
def test_quadrature_weak_value_both_conventions(a, x, phi):
    for conv in hilbert.CONVENTIONS:
        post = QuadratureFunctional(x, phi, conv)
        ov = abs(analytic.quadrature_overlap(x, phi, a, conv))
        if ov < 1e-6:
            continue
        w = weak_values.weak_value_numeric(hilbert.coherent_fock(a, Cutoff(60, 1e-18)), post)
        assert abs(w.value - weak_values.n_w_analytic(post, a)) < 1e-6 * max(1.0, abs(w.value))


@given(alphas, st.floats(0.0, 1.0), phases)
def test_squeezed_weak_value(a, r, phi):
    v = hilbert.squeezed_vacuum_fock(r, phi, Cutoff(200, 1e-18))
    w = weak_values.weak_value_numeric(hilbert.coherent_fock(a, Cutoff(200, 1e-18)), Normalizable(v))
    closed = -a * a * cmath.exp(-1j * phi) * math.tanh(r)
    assert abs(w.value - closed) < 1e-8
    assert abs(weak_values.n_w_analytic(hilbert.SqueezedVacuum(r, phi), a) - closed) < 1e-15


@given(alphas, st.floats(0.1, 1.5), phases)
def test_overlap_decomposition_matches_closed_form(a, b, phi):
    beta = b * cmath.exp(1j * phi)
    nw = weak_values.n_w_from_overlap(lambda al: analytic.coherent_overlap(beta, al), a)
    assert abs(nw - a * beta.conjugate()) < 1e-6


def test_self_overlap_gives_expectation():
    # Post-selecting on the pre-selected state returns the ordinary mean |alpha|^2.
    w = weak_values.weak_value_numeric(coh(1.3), Normalizable(coh(1.3)))
    assert w.value == pytest.approx(1.69, abs=1e-12)


def test_weak_moments():
    a, beta = 0.8, 0.6j
    m = weak_values.weak_moments(coh(a), Normalizable(coh(beta)), 3)
    z = a * beta.conjugate()
    # normally ordered moments of n for coherent pre/post: <n^2>_W = z^2 + z, <n^3>_W = z^3 + 3z^2 + z
    assert m[0] == pytest.approx(1)
    assert m[1] == pytest.approx(z, abs=1e-10)
    assert m[2] == pytest.approx(z * z + z, abs=1e-10)
    assert m[3] == pytest.approx(z ** 3 + 3 * z * z + z, abs=1e-10)
    assert m.m_max == 3
    with pytest.raises(ValidationError):
        weak_values.weak_moments(coh(a), Normalizable(coh(beta)), 0)


def test_custom_observable():
    obs = np.arange(CUT.dim, dtype=float) ** 2
    w = weak_values.weak_value_numeric(coh(0.9), Normalizable(coh(0.9)), observable=obs)
    assert w.value == pytest.approx(0.81 ** 2 + 0.81, abs=1e-10)


def test_near_orthogonal_raises():
    e0 = hilbert.FockVector(np.eye(CUT.dim)[0], CUT)
    e1 = hilbert.FockVector(np.eye(CUT.dim)[1], CUT)
    with pytest.raises(NearOrthogonalPostSelection):
        weak_values.weak_value_numeric(e0, Normalizable(e1))


def test_success_condition_and_unsupported():
    w = weak_values.WeakValue(0.3 + 0.2j, 1.0)
    assert weak_values.success_condition(w, 0.05)
    assert not weak_values.success_condition(weak_values.WeakValue(0.3 - 0.2j, 1.0), 0.05)
    with pytest.raises(NonPositiveCoupling):
        weak_values.success_condition(w, 0.0)
    with pytest.raises(UnsupportedScheme):
        weak_values.n_w_analytic(hilbert.CustomFock(coh(0.5)), 0.5)


def test_quadrature_success_boundary():
    # Im n_W (conjugate convention) changes sign at x = sqrt2 alpha cos(phi).
    a, phi = 0.8, math.pi / 3
    x0 = math.sqrt(2) * a * math.cos(phi)
    for dx, sign in ((-0.01, -1), (0.01, 1)):
        w = weak_values.n_w_analytic(QuadratureFunctional(x0 + dx, phi), a)
        assert math.copysign(1, w.imag) == sign
