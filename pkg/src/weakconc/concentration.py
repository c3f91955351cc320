"""Exact post-selected protocol, weak-value prediction and weakness diagnostics.

Bob's mode B of a TMSV is coupled to an ancilla C by ``exp(-i kappa_T n_B n_C)``
and the ancilla is post-selected.  Because the coupling is diagonal in ``n_B``
the output stays Schmidt-diagonal and its ``n``-th coefficient is the input
coefficient times the filter function ``G(n) = <Phi_2|exp(-i kappa_T n n_C)|Phi_1>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import entanglement
from .errors import (CutoffTooSmall, NearOrthogonalPostSelection, NonPositiveCoupling, NotNormalized,
                     UnphysicalOutput, UnphysicalSqueezing, ValidationError, VanishingPostSelection)
from .hilbert import (AncillaSpec, Coherent, Cutoff, CustomFock, FockVector, PostSelector, QuadratureEigenstate,
                      QuadratureFunctional, SchmidtDiagonalState, ancilla_ket, post_selector, tmsv)
from .weak_values import ORTHO_THRESHOLD, WeakValue, n_w_analytic, success_condition, weak_value_numeric

VANISHING_PROB = 1e-30


@dataclass(frozen=True)
class ProtocolConfig:
    """One concentration scenario.

    ``cutoff`` truncates the two Schmidt modes, ``ancilla_cutoff`` the ancilla
    (defaults to ``cutoff``).  ``post`` may be any ancilla spec; quadrature
    eigenstates become non-normalisable functionals.
    """

    lam: float
    kappa_T: float
    pre: AncillaSpec
    post: AncillaSpec
    cutoff: Cutoff
    ancilla_cutoff: Optional[Cutoff] = None
    ortho_threshold: float = ORTHO_THRESHOLD

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise UnphysicalSqueezing(f"two-mode squeezing requires 0 <= lambda < 1, got lambda={self.lam!r}")
        if not math.isfinite(self.kappa_T):
            raise ValidationError(f"kappa_T must be finite, got {self.kappa_T!r}")
        if isinstance(self.pre, QuadratureEigenstate):
            raise ValidationError("pre-selected ancilla must be a normalisable state")
        if not self.ortho_threshold > 0:
            raise ValidationError(f"ortho_threshold must be > 0, got {self.ortho_threshold!r}")
        if self.ancilla_cutoff is None:
            object.__setattr__(self, "ancilla_cutoff", self.cutoff)
        # trigger tail guards now so an invalid config never escapes construction
        self.input_state, self.pre_ket, self.post_selector

    @cached_property
    def input_state(self) -> SchmidtDiagonalState:
        return tmsv(self.lam, self.cutoff)

    @cached_property
    def pre_ket(self) -> FockVector:
        return ancilla_ket(self.pre, self.ancilla_cutoff)

    @cached_property
    def post_selector(self) -> PostSelector:
        return post_selector(self.post, self.ancilla_cutoff)

    @property
    def analytic_alpha(self) -> Optional[float]:
        """Real coherent amplitude of the pre-selection, if the closed forms apply."""
        if isinstance(self.pre, Coherent) and self.pre.phi == 0.0:
            return self.pre.alpha
        return None


@dataclass(frozen=True)
class FilterFunction:
    g: np.ndarray

    def __getitem__(self, n):
        return self.g[n]

    @property
    def ratios(self) -> np.ndarray:
        return self.g / self.g[0]


def filter_function(pre: FockVector, post: PostSelector, kappa_T: float, n_max_B: int) -> FilterFunction:
    """``G(n) = sum_m <Phi_2|m> e^{-i kappa_T n m} <m|Phi_1>`` for ``n = 0 .. n_max_B``."""
    m = np.arange(pre.cutoff.dim)
    weighted = post.row(pre.cutoff.n_max) * pre.amps
    phases = np.exp(-1j * kappa_T * np.outer(np.arange(n_max_B + 1), m))
    g = phases @ weighted
    g[0] = weighted.sum()
    return FilterFunction(g)


@dataclass(frozen=True)
class ExactOutput:
    state: SchmidtDiagonalState
    success_prob: float
    is_density: bool
    filter: FilterFunction


def apply_protocol_exact(config: ProtocolConfig) -> ExactOutput:
    """Post-selected output and the probability (density, for quadrature) of the event."""
    g = filter_function(config.pre_ket, config.post_selector, config.kappa_T, config.cutoff.n_max)
    raw = config.input_state.coeffs * g.g
    prob = math.fsum(np.abs(raw) ** 2)
    if prob < VANISHING_PROB:
        raise VanishingPostSelection(f"post-selection probability {prob:.3e} is numerically zero")
    state = SchmidtDiagonalState(raw / math.sqrt(prob), config.cutoff, True)
    return ExactOutput(state, prob, config.post_selector.is_density, g)


def windowed_success_probability(config: ProtocolConfig, width: float, order: int = 64) -> float:
    """Success probability for a homodyne acceptance window ``[x - width/2, x + width/2]``.

    Integrates the outcome density by Gauss-Legendre quadrature.
    """
    post = config.post_selector
    if not isinstance(post, QuadratureFunctional):
        raise ValidationError("acceptance windows only apply to quadrature post-selection")
    if not width > 0:
        raise ValidationError(f"window width must be > 0, got {width!r}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    xs = post.x + 0.5 * width * nodes
    total = 0.0
    for xk, wk in zip(xs, weights):
        fk = QuadratureFunctional(float(xk), post.phi, post.convention)
        g = filter_function(config.pre_ket, fk, config.kappa_T, config.cutoff.n_max)
        total += wk * math.fsum(np.abs(config.input_state.coeffs * g.g) ** 2)
    return 0.5 * width * total


def predicted_tmsv(lam: float, kappa_T: float, o_w: complex, cutoff: Cutoff) -> SchmidtDiagonalState:
    """TMSV with ``lambda' = lambda e^{-i kappa_T o_w}``.

    Raises ``UnphysicalOutput`` when ``lambda^2 e^{2 kappa_T Im o_w} >= 1``.
    """
    if not 0.0 <= lam < 1.0:
        raise UnphysicalSqueezing(f"two-mode squeezing requires 0 <= lambda < 1, got lambda={lam!r}")
    q = lam * lam * math.exp(2 * kappa_T * o_w.imag)
    if q >= 1.0:
        raise UnphysicalOutput(
            f"lambda^2 exp(2 kappa_T Im O_W) = {q:.6g} >= 1: predicted output is not normalisable")
    lam_p = lam * np.exp(-1j * kappa_T * o_w)
    steps = np.full(cutoff.dim, lam_p, dtype=complex)
    steps[0] = math.sqrt(1.0 - q)
    tail = q ** cutoff.dim
    if tail > cutoff.tail_tol:
        raise CutoffTooSmall(
            f"predicted TMSV |lambda'|={math.sqrt(q):.6g}: truncated mass {tail:.3e} exceeds "
            f"tail_tol={cutoff.tail_tol:.1e} at n_max={cutoff.n_max}")
    return SchmidtDiagonalState(np.cumprod(steps), cutoff, True)


@dataclass(frozen=True)
class Residuals:
    """Weakness-condition residuals over ``n = 0 .. n_max``.

    ``damped[n] = lambda^n (G(n)/G(0) - e^{-i kappa_T n O_W})``;
    ``relative`` is the same without the ``lambda^n`` factor.
    """

    damped: np.ndarray
    relative: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.damped)))

    @property
    def argmax(self) -> int:
        return int(np.argmax(np.abs(self.damped)))


def weakness_residuals(config: ProtocolConfig, o_w: complex) -> Residuals:
    g = filter_function(config.pre_ket, config.post_selector, config.kappa_T, config.cutoff.n_max)
    scale = config.pre_ket.norm * config.post_selector.scale(config.ancilla_cutoff.n_max)
    if abs(g[0]) < config.ortho_threshold * scale:
        raise NearOrthogonalPostSelection(f"|G(0)| = {abs(g[0]):.3e} below orthogonality threshold")
    n = np.arange(config.cutoff.dim)
    rel = g.ratios - np.exp(-1j * config.kappa_T * n * o_w)
    rel[0] = 0.0
    return Residuals(config.lam ** n * rel, rel)


def approximation_fidelity(exact: SchmidtDiagonalState, predicted: SchmidtDiagonalState) -> float:
    """``|<predicted|exact>|^2``."""
    if not (exact.normalized and predicted.normalized):
        raise NotNormalized("fidelity needs normalized states")
    if exact.cutoff.n_max != predicted.cutoff.n_max:
        raise ValidationError("states must share a cutoff")
    f = abs(np.vdot(predicted.coeffs, exact.coeffs)) ** 2
    return float(min(1.0, max(0.0, f)))


@dataclass(frozen=True)
class ConcentrationResult:
    """Everything one protocol run produces; ``None`` marks an absent quantity (see ``notes``)."""

    config: ProtocolConfig
    exact_output: SchmidtDiagonalState
    success_prob: float
    is_density: bool
    weak_value: Optional[WeakValue]
    n_w_analytic: Optional[complex]
    o_w: Optional[complex]
    lambda_prime: Optional[complex]
    predicted_output: Optional[SchmidtDiagonalState]
    residuals: Optional[Residuals]
    fidelity: Optional[float]
    verdict: entanglement.EntanglementVerdict
    success: Optional[bool]
    unphysical_output: bool = False
    notes: tuple = field(default=())


def run(config: ProtocolConfig, analytic_weak_value: bool = False) -> ConcentrationResult:
    notes = []
    exact = apply_protocol_exact(config)

    analytic = None
    if config.analytic_alpha is not None and not isinstance(config.post, CustomFock):
        analytic = n_w_analytic(config.post, config.analytic_alpha)

    try:
        wv = weak_value_numeric(config.pre_ket, config.post_selector, ortho_threshold=config.ortho_threshold)
    except NearOrthogonalPostSelection as e:
        wv = None
        notes.append(f"weak_value: {e}")

    if analytic_weak_value:
        if analytic is None:
            notes.append("analytic weak value unavailable for this scheme; using numeric")
            o_w = wv.value if wv else None
        else:
            o_w = analytic
    else:
        o_w = wv.value if wv else None

    lambda_prime = predicted = residuals = fidelity = None
    unphysical = False
    if o_w is not None:
        lambda_prime = complex(config.lam * np.exp(-1j * config.kappa_T * o_w))
        try:
            predicted = predicted_tmsv(config.lam, config.kappa_T, o_w, config.cutoff)
        except UnphysicalOutput as e:
            unphysical = True
            notes.append(f"predicted_output: {e}")
        except CutoffTooSmall as e:
            notes.append(f"predicted_output: {e}")
        try:
            residuals = weakness_residuals(config, o_w)
        except NearOrthogonalPostSelection as e:
            notes.append(f"residuals: {e}")
        if predicted is not None:
            fidelity = approximation_fidelity(exact.state, predicted)

    success = None
    if wv is not None:
        try:
            success = success_condition(wv, config.kappa_T)
        except NonPositiveCoupling as e:
            notes.append(f"success: {e}")

    verdict = entanglement.compare(config.input_state, exact.state)
    return ConcentrationResult(config, exact.state, exact.success_prob, exact.is_density, wv, analytic, o_w,
                               lambda_prime, predicted, residuals, fidelity, verdict, success, unphysical,
                               tuple(notes))

