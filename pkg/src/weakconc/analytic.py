"""Closed-form overlaps and filter-function ratios for the three built-in schemes.

These are evaluated directly from the analytic expressions and never touch a
Fock expansion, so they serve as independent references for the numerics.
All overlaps use normalised coherent states.
"""
from __future__ import annotations

import cmath
import math

from .hilbert import CONJUGATE, STANDARD, _phase_sign


def coherent_overlap(beta: complex, alpha: complex) -> complex:
    """``<beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + beta* alpha)``."""
    return cmath.exp(-abs(alpha) ** 2 / 2 - abs(beta) ** 2 / 2 + beta.conjugate() * alpha)


def quadrature_overlap(x: float, phi: float, alpha: complex, convention: str = STANDARD) -> complex:
    """``<x_phi|alpha>`` including the ``e^{-|alpha|^2/2}`` normalisation."""
    u = cmath.exp(_phase_sign(convention) * 1j * phi)
    return (math.pi ** -0.25
            * cmath.exp(-x * x / 2 + math.sqrt(2) * u * x * alpha - u * u * alpha * alpha / 2 - abs(alpha) ** 2 / 2))


def squeezed_overlap(r: float, phi: float, alpha: complex) -> complex:
    """``<r e^{i phi}|alpha> = sqrt(sech r) exp(-|alpha|^2/2 - alpha^2 e^{-i phi} tanh r / 2)``."""
    return math.sqrt(1 / math.cosh(r)) * cmath.exp(
        -abs(alpha) ** 2 / 2 - alpha * alpha * cmath.exp(-1j * phi) * math.tanh(r) / 2)


# G(n)/G(0) for cross-Kerr coupling kappa_T and a real coherent pre-selection alpha

def coherent_filter_ratio(n: int, kappa_T: float, alpha: float, beta: complex) -> complex:
    return cmath.exp((cmath.exp(-1j * kappa_T * n) - 1) * beta.conjugate() * alpha)


def quadrature_filter_ratio(n: int, kappa_T: float, alpha: float, x: float, phi: float,
                            convention: str = CONJUGATE) -> complex:
    s = _phase_sign(convention)

    def f(k):
        return cmath.exp(math.sqrt(2) * x * alpha * cmath.exp(s * 1j * phi - 1j * kappa_T * k)
                         - alpha ** 2 * cmath.exp(2 * s * 1j * phi - 2j * kappa_T * k) / 2)

    return f(n) / f(0)


def squeezed_filter_ratio(n: int, kappa_T: float, alpha: float, r: float, phi: float) -> complex:
    return cmath.exp(-alpha ** 2 / 2 * (cmath.exp(-2j * n * kappa_T) - 1) * cmath.exp(-1j * phi) * math.tanh(r))


def squeezed_filter_ratio_flipped(n: int, kappa_T: float, alpha: float, r: float, phi: float) -> complex:
    """Squeezed-scheme ratio with the opposite coupling sign, ``e^{+2 i n kappa_T}``.

    Equal to :func:`squeezed_filter_ratio` with ``kappa_T -> -kappa_T``.
    """
    return cmath.exp(-alpha ** 2 / 2 * (cmath.exp(2j * n * kappa_T) - 1) * cmath.exp(-1j * phi) * math.tanh(r))
