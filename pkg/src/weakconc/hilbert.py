"""Truncated Fock-space states and overlaps.

Every single-mode state is held as a vector of amplitudes ``c_0 .. c_{n_max}``
together with the :class:`Cutoff` that produced it.  Analytic families
(coherent, squeezed vacuum, two-mode squeezed vacuum) compute the probability
mass they lose to truncation exactly and refuse to build if it exceeds the
cutoff's ``tail_tol``.

Post-selections are represented as bra functionals: anything with a
``row(n_max)`` method returning the row vector ``<Phi_2|n>``.  Quadrature
eigenstates are not normalisable, so their outcome probabilities are densities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Union

import numpy as np
from scipy.special import gammaln

from .errors import CutoffTooSmall, NotNormalized, UnphysicalSqueezing, ValidationError

EPS = np.finfo(float).eps

# phase conventions for <x_phi|n>
STANDARD = "standard"    # e^{-i n phi} psi_n(x): eigenstates of (e^{i phi} a^dag + e^{-i phi} a)/sqrt2
CONJUGATE = "conjugate"  # e^{+i n phi} psi_n(x)
CONVENTIONS = (STANDARD, CONJUGATE)


@dataclass(frozen=True)
class Cutoff:
    n_max: int
    tail_tol: float = 1e-10

    def __post_init__(self):
        if isinstance(self.n_max, bool) or int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValidationError(f"n_max must be a non-negative integer, got {self.n_max!r}")
        if not 0.0 < self.tail_tol < 1.0:
            raise ValidationError(f"tail_tol must lie in (0, 1), got {self.tail_tol!r}")
        object.__setattr__(self, "n_max", int(self.n_max))

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def with_n_max(self, n_max: int) -> "Cutoff":
        return Cutoff(n_max, self.tail_tol)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockVector:
    """Single-mode state truncated at ``cutoff.n_max``.

    ``tail_mass`` is the probability mass discarded by truncation.  For
    analytic families it is computed from the untruncated series; for
    arbitrary amplitudes it defaults to ``1 - sum |c_n|^2``.
    """

    amps: np.ndarray
    cutoff: Cutoff
    tail_mass: float = field(default=None)

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1 or amps.size != self.cutoff.dim:
            raise ValidationError(
                f"expected {self.cutoff.dim} amplitudes for n_max={self.cutoff.n_max}, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        norm2 = math.fsum(np.abs(amps) ** 2)
        if norm2 > 1.0 + 10 * EPS:
            raise ValidationError(f"sum |c_n|^2 = {norm2!r} exceeds 1")
        object.__setattr__(self, "amps", amps)
        if self.tail_mass is None:
            object.__setattr__(self, "tail_mass", max(0.0, 1.0 - norm2))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def padded(self, n_max: int) -> np.ndarray:
        """Amplitudes zero-padded (or truncated) to length ``n_max + 1``."""
        out = np.zeros(n_max + 1, dtype=complex)
        k = min(n_max + 1, self.amps.size)
        out[:k] = self.amps[:k]
        return out

    def normalized(self) -> "FockVector":
        return FockVector(self.amps / self.norm, self.cutoff, 0.0)


@dataclass(frozen=True)
class SchmidtDiagonalState:
    """Bipartite state ``sum_n c_n |n, n>`` (Schmidt basis = Fock basis)."""

    coeffs: np.ndarray
    cutoff: Cutoff
    normalized: bool = True

    def __post_init__(self):
        coeffs = _frozen(self.coeffs)
        if coeffs.ndim != 1 or coeffs.size != self.cutoff.dim:
            raise ValidationError(f"expected {self.cutoff.dim} Schmidt coefficients, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)
        if self.normalized:
            # truncated analytic states are allowed to miss up to tail_tol of mass
            dev = abs(self.norm2 - 1.0)
            if dev > max(1e-12, self.cutoff.tail_tol):
                raise NotNormalized(f"state flagged normalized but |sum |c|^2 - 1| = {dev:.3e}")

    @property
    def norm2(self) -> float:
        return math.fsum(np.abs(self.coeffs) ** 2)

    @property
    def probs(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def normalize(self) -> "SchmidtDiagonalState":
        return SchmidtDiagonalState(self.coeffs / math.sqrt(self.norm2), self.cutoff, True)


# --- ancilla specifications -------------------------------------------------

@dataclass(frozen=True)
class Coherent:
    """Coherent state ``|alpha e^{i phi}>`` with ``alpha > 0``."""

    alpha: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError(f"coherent amplitude must be > 0, got alpha={self.alpha!r}")

    @property
    def amplitude(self) -> complex:
        return self.alpha * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class SqueezedVacuum:
    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.r >= 0:
            raise UnphysicalSqueezing(f"squeezing r must be >= 0, got r={self.r!r}")


@dataclass(frozen=True)
class QuadratureEigenstate:
    x: float
    phi: float = 0.0
    convention: str = CONJUGATE

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValidationError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")


@dataclass(frozen=True)
class CustomFock:
    vector: FockVector


AncillaSpec = Union[Coherent, SqueezedVacuum, QuadratureEigenstate, CustomFock]


# --- post-selection functionals ---------------------------------------------

@dataclass(frozen=True)
class Normalizable:
    vector: FockVector
    is_density: ClassVar[bool] = False

    def row(self, n_max: int) -> np.ndarray:
        return np.conj(self.vector.padded(n_max))

    def scale(self, n_max: int) -> float:
        return float(np.linalg.norm(self.row(n_max)))


@dataclass(frozen=True)
class QuadratureFunctional:
    x: float
    phi: float = 0.0
    convention: str = CONJUGATE
    is_density: ClassVar[bool] = True

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValidationError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")

    def row(self, n_max: int) -> np.ndarray:
        return quadrature_row(self.x, self.phi, n_max, self.convention)

    def scale(self, n_max: int) -> float:
        return float(np.linalg.norm(self.row(n_max)))


PostSelector = Union[Normalizable, QuadratureFunctional]


# --- constructors -------------------------------------------------------------

def _check_tail(tail: float, cutoff: Cutoff, what: str):
    if tail > cutoff.tail_tol:
        raise CutoffTooSmall(
            f"{what}: truncated mass {tail:.3e} exceeds tail_tol={cutoff.tail_tol:.1e} at n_max={cutoff.n_max}")


def _coherent_series(alpha: complex, n: int) -> np.ndarray:
    steps = np.empty(n + 1, dtype=complex)
    steps[0] = math.exp(-abs(alpha) ** 2 / 2)
    steps[1:] = alpha / np.sqrt(np.arange(1, n + 1))
    return np.cumprod(steps)


def coherent_fock(alpha: complex, cutoff: Cutoff) -> FockVector:
    """Coherent state amplitudes ``e^{-|a|^2/2} a^n / sqrt(n!)``.

    Built by the recurrence ``c_{n+1} = c_n a / sqrt(n+1)``; the tail mass is
    summed from the same series continued well past the Poisson bulk.
    """
    a = complex(alpha)
    n_ext = max(2 * cutoff.n_max + 64, int(abs(a) ** 2 + 20 * abs(a) + 64))
    series = _coherent_series(a, n_ext)
    tail = math.fsum(np.abs(series[cutoff.dim:]) ** 2)
    _check_tail(tail, cutoff, f"coherent(alpha={alpha})")
    return FockVector(series[:cutoff.dim], cutoff, tail)


def _squeezed_even(r: float, phi: float, m: np.ndarray) -> np.ndarray:
    t = math.tanh(r)
    logmag = 0.5 * math.log(1.0 / math.cosh(r)) + 0.5 * gammaln(2 * m + 1) - m * math.log(2.0) - gammaln(m + 1)
    if t > 0:
        logmag = logmag + m * math.log(t)
        phase = np.exp(1j * m * (phi + math.pi))
    else:
        logmag = np.where(m == 0, logmag, -np.inf)
        phase = np.ones(m.shape, dtype=complex)
    return np.exp(logmag) * phase


def squeezed_vacuum_fock(r: float, phi: float, cutoff: Cutoff) -> FockVector:
    """Single-mode squeezed vacuum ``|r e^{i phi}>``.

    ``c_{2m} = sqrt(sech r) (-e^{i phi} tanh r)^m sqrt((2m)!) / (2^m m!)``, odd
    amplitudes zero.  This sign convention gives
    ``<r e^{i phi}|alpha> = sqrt(sech r) exp(-alpha^2/2 (1 + e^{-i phi} tanh r))``
    for real ``alpha``.
    """
    if not r >= 0:
        raise ValidationError(f"squeezing r must be >= 0, got {r!r}")
    amps = np.zeros(cutoff.dim, dtype=complex)
    m = np.arange(cutoff.n_max // 2 + 1)
    amps[0::2] = _squeezed_even(r, phi, m)
    t2 = math.tanh(r) ** 2
    if t2 == 0.0:
        tail = 0.0
    else:
        # even-term ratio is t^2 (2m+1)/(2m+2) < t^2: sum explicitly, bound the rest geometrically
        m_hi = m[-1] + 1 + min(200_000, int(math.ceil(80.0 / -math.log(t2))) + 8)
        extra = np.abs(_squeezed_even(r, phi, np.arange(m[-1] + 1, m_hi))) ** 2
        tail = math.fsum(extra) + (extra[-1] * t2 / (1 - t2) if extra.size else 0.0)
    _check_tail(tail, cutoff, f"squeezed_vacuum(r={r}, phi={phi})")
    return FockVector(amps, cutoff, tail)


def tmsv(lam: float, cutoff: Cutoff) -> SchmidtDiagonalState:
    """Two-mode squeezed vacuum ``sqrt(1 - lam^2) sum_n lam^n |n, n>``."""
    if not 0.0 <= lam < 1.0:
        raise UnphysicalSqueezing(f"two-mode squeezing requires 0 <= lambda < 1, got lambda={lam!r}")
    steps = np.full(cutoff.dim, lam, dtype=float)
    steps[0] = math.sqrt(1.0 - lam * lam)
    coeffs = np.cumprod(steps)
    _check_tail(lam ** (2 * cutoff.dim), cutoff, f"tmsv(lambda={lam})")
    return SchmidtDiagonalState(coeffs.astype(complex), cutoff, True)


def tmsv_cutoff(lam: float, tail_tol: float = 1e-10) -> Cutoff:
    """Smallest cutoff for which ``tmsv(lam)`` passes the tail guard."""
    if not 0.0 <= lam < 1.0:
        raise UnphysicalSqueezing(f"two-mode squeezing requires 0 <= lambda < 1, got lambda={lam!r}")
    if lam == 0.0:
        return Cutoff(0, tail_tol)
    n = max(0, math.ceil(math.log(tail_tol) / (2 * math.log(lam))) - 1)
    while lam ** (2 * (n + 1)) > tail_tol:
        n += 1
    return Cutoff(n, tail_tol)


def fit_cutoff(build: Callable[[Cutoff], object], tail_tol: float = 1e-10,
               n_limit: int = 1 << 14) -> Cutoff:
    """Smallest ``Cutoff`` for which ``build`` does not raise ``CutoffTooSmall``.

    Assumes tail mass is non-increasing in ``n_max``.
    """
    hi = 8
    while True:
        try:
            build(Cutoff(hi, tail_tol))
            break
        except CutoffTooSmall:
            if hi >= n_limit:
                raise
            hi = min(2 * hi, n_limit)
    lo = -1  # invariant: lo fails (or is below range), hi passes
    while hi - lo > 1:
        mid = (lo + hi) // 2
        try:
            build(Cutoff(mid, tail_tol))
            hi = mid
        except CutoffTooSmall:
            lo = mid
    return Cutoff(hi, tail_tol)


def ancilla_ket(spec: AncillaSpec, cutoff: Cutoff) -> FockVector:
    if isinstance(spec, Coherent):
        return coherent_fock(spec.amplitude, cutoff)
    if isinstance(spec, SqueezedVacuum):
        return squeezed_vacuum_fock(spec.r, spec.phi, cutoff)
    if isinstance(spec, CustomFock):
        v = spec.vector
        return FockVector(v.padded(cutoff.n_max), cutoff, v.tail_mass if cutoff.n_max >= v.cutoff.n_max else None)
    raise ValidationError(f"{type(spec).__name__} is not a normalisable ancilla state")


def post_selector(spec: AncillaSpec, cutoff: Cutoff) -> PostSelector:
    if isinstance(spec, QuadratureEigenstate):
        return QuadratureFunctional(spec.x, spec.phi, spec.convention)
    return Normalizable(ancilla_ket(spec, cutoff))


# --- quadrature eigenstates ---------------------------------------------------

def hermite_functions(x: float, n_max: int) -> np.ndarray:
    """Normalised Hermite functions ``psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))``.

    Uses the three-term recurrence on the normalised functions themselves, which
    neither overflows nor loses precision for large ``n``.
    """
    psi = np.zeros(n_max + 1)
    psi[0] = math.pi ** -0.25 * math.exp(-x * x / 2)
    if n_max >= 1:
        psi[1] = math.sqrt(2.0) * x * psi[0]
    for k in range(2, n_max + 1):
        psi[k] = math.sqrt(2.0 / k) * x * psi[k - 1] - math.sqrt((k - 1) / k) * psi[k - 2]
    return psi


def _phase_sign(convention: str) -> int:
    if convention == STANDARD:
        return -1
    if convention == CONJUGATE:
        return 1
    raise ValidationError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def quadrature_row(x: float, phi: float, n_max: int, convention: str = STANDARD) -> np.ndarray:
    """Row vector ``<x_phi|n>`` for ``n = 0 .. n_max``."""
    s = _phase_sign(convention)
    n = np.arange(n_max + 1)
    return np.exp(s * 1j * phi * n) * hermite_functions(x, n_max)


def quadrature_fock_overlap(x: float, phi: float, n: int, convention: str = STANDARD) -> complex:
    """``<x_phi|n>``.

    ``standard``: ``e^{-i n phi} psi_n(x)``, the eigenstates of
    ``(e^{i phi} a^dag + e^{-i phi} a)/sqrt(2)``; summed against a coherent state
    it gives ``pi^{-1/4} exp(-x^2/2 + sqrt2 e^{-i phi} x a - e^{-2i phi} a^2/2 - |a|^2/2)``.
    ``conjugate``: ``e^{+i n phi} psi_n(x)``, i.e. ``phi -> -phi``.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    return complex(quadrature_row(x, phi, n, convention)[n])


def overlap(bra: PostSelector, ket: FockVector) -> complex:
    """``<Phi_2|Phi_1>``; the shorter vector is zero-padded."""
    n = ket.cutoff.n_max
    if isinstance(bra, Normalizable):
        n = max(n, bra.vector.cutoff.n_max)
    return complex(np.dot(bra.row(n), ket.padded(n)))
