"""Weak values of the ancilla photon number and the concentration success test."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NearOrthogonalPostSelection, NonPositiveCoupling, UnsupportedScheme, ValidationError
from .hilbert import (Coherent, FockVector, PostSelector, QuadratureEigenstate,
                      QuadratureFunctional, SqueezedVacuum, _phase_sign)

ORTHO_THRESHOLD = 1e-8


@dataclass(frozen=True)
class WeakValue:
    value: complex
    overlap_mag: float

    @property
    def imag(self) -> float:
        return self.value.imag


@dataclass(frozen=True)
class WeakMoments:
    """``moments[m] = <Phi_2|O^m|Phi_1> / <Phi_2|Phi_1>`` for ``m = 0 .. m_max``."""

    moments: np.ndarray

    def __getitem__(self, m):
        return self.moments[m]

    @property
    def m_max(self) -> int:
        return self.moments.size - 1


def _checked_overlap(pre: FockVector, post: PostSelector, ortho_threshold: float):
    n = pre.cutoff.n_max
    row = post.row(n)
    ov = complex(np.dot(row, pre.amps))
    scale = pre.norm * float(np.linalg.norm(row))
    if abs(ov) < ortho_threshold * scale:
        raise NearOrthogonalPostSelection(
            f"|<Phi_2|Phi_1>| = {abs(ov):.3e} is below {ortho_threshold:.0e} x {scale:.3e}; weak value undefined")
    return row, ov


def weak_moments(pre: FockVector, post: PostSelector, m_max: int,
                 observable: Optional[np.ndarray] = None,
                 ortho_threshold: float = ORTHO_THRESHOLD) -> WeakMoments:
    """Weak moments of a Fock-diagonal observable (photon number by default)."""
    if m_max < 1:
        raise ValidationError("m_max must be >= 1")
    row, ov = _checked_overlap(pre, post, ortho_threshold)
    spectrum = np.arange(pre.cutoff.dim, dtype=float) if observable is None else np.asarray(observable)
    weighted = row * pre.amps
    powers = spectrum[None, :] ** np.arange(m_max + 1)[:, None]
    return WeakMoments(powers @ weighted / ov)


def weak_value_numeric(pre: FockVector, post: PostSelector, observable: Optional[np.ndarray] = None,
                       ortho_threshold: float = ORTHO_THRESHOLD) -> WeakValue:
    row, ov = _checked_overlap(pre, post, ortho_threshold)
    spectrum = np.arange(pre.cutoff.dim, dtype=float) if observable is None else np.asarray(observable)
    return WeakValue(complex(np.dot(row * spectrum, pre.amps) / ov), abs(ov))


def n_w_analytic(post: object, alpha: float) -> complex:
    """Closed-form photon-number weak value for a real coherent pre-selection.

    coherent ``|beta>``: ``alpha beta*``;
    quadrature ``|x_phi>``: ``sqrt2 x alpha u - alpha^2 u^2`` with ``u = e^{+i phi}``
    (conjugate convention) or ``e^{-i phi}`` (standard);
    squeezed ``|r e^{i phi}>``: ``-alpha^2 e^{-i phi} tanh r``.
    """
    if not alpha > 0:
        raise ValidationError(f"alpha must be > 0, got {alpha!r}")
    if isinstance(post, Coherent):
        return alpha * post.amplitude.conjugate()
    if isinstance(post, (QuadratureEigenstate, QuadratureFunctional)):
        u = cmath.exp(_phase_sign(post.convention) * 1j * post.phi)
        return math.sqrt(2) * post.x * alpha * u - alpha * alpha * u * u
    if isinstance(post, SqueezedVacuum):
        return -alpha * alpha * cmath.exp(-1j * post.phi) * math.tanh(post.r)
    raise UnsupportedScheme(f"no closed-form weak value for {type(post).__name__}")


def n_w_from_overlap(overlap_fn: Callable[[float], complex], alpha: float, h: float = 1e-5) -> complex:
    """``alpha^2 + (alpha/R) dR/dalpha + i alpha dtheta/dalpha`` by central differences.

    ``overlap_fn(alpha)`` must return ``<Phi_2|alpha>`` for the normalised
    coherent state.  The phase derivative is taken on the ratio of neighbouring
    overlaps, so branch cuts of ``theta`` do not matter.
    """
    lo, mid, hi = overlap_fn(alpha - h), overlap_fn(alpha), overlap_fn(alpha + h)
    dlogR = (math.log(abs(hi)) - math.log(abs(lo))) / (2 * h)
    dtheta = cmath.phase(hi / lo) / (2 * h)
    return complex(alpha * alpha + alpha * dlogR, alpha * dtheta)


def success_condition(w: WeakValue, kappa_T: float) -> bool:
    """True iff the weak value has positive imaginary part (requires ``kappa_T > 0``)."""
    if not kappa_T > 0:
        raise NonPositiveCoupling(f"success condition assumes kappa_T > 0, got {kappa_T!r}")
    return w.value.imag > 0
