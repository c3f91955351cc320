"""Schmidt spectra, entanglement measures and the majorization certificate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotNormalized, UnphysicalSqueezing, ValidationError
from .hilbert import SchmidtDiagonalState

MAJORIZATION_EPS = 1e-9
SPECTRUM_TOL = 1e-10


@dataclass(frozen=True)
class SchmidtSpectrum:
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValidationError("spectrum must be a non-empty 1-D array")
        if np.any(p < 0):
            raise ValidationError("spectrum has negative entries")
        if np.any(np.diff(p) > 0):
            raise ValidationError("spectrum must be sorted in descending order")
        if abs(math.fsum(p) - 1.0) > SPECTRUM_TOL + 64 * np.finfo(float).eps:
            raise NotNormalized(f"spectrum sums to {math.fsum(p)!r}")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_probs(cls, p) -> "SchmidtSpectrum":
        return cls(np.sort(np.asarray(p, dtype=float))[::-1])

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[:self.probs.size] = self.probs
        return out


@dataclass(frozen=True)
class EntanglementVerdict:
    majorized: bool
    entropy_in: float
    entropy_out: float
    purity_in: float
    purity_out: float
    mean_photons_in: float
    mean_photons_out: float

    @property
    def entropy_gain(self) -> float:
        return self.entropy_out - self.entropy_in

    @property
    def more_entangled(self) -> bool:
        """Output certified more entangled: majorized with a strict entropy gain."""
        return self.majorized and self.entropy_gain > MAJORIZATION_EPS


def schmidt_spectrum(state: SchmidtDiagonalState) -> SchmidtSpectrum:
    if not state.normalized:
        raise NotNormalized("schmidt_spectrum needs a normalized state")
    return SchmidtSpectrum.from_probs(state.probs)


def von_neumann_entropy(s: SchmidtSpectrum, base: float = 2.0) -> float:
    p = s.probs[s.probs > 0]
    return float(-np.sum(p * np.log(p)) / math.log(base))


def purity(s: SchmidtSpectrum) -> float:
    return float(np.sum(s.probs ** 2))


def majorizes(d: SchmidtSpectrum, c: SchmidtSpectrum, eps: float = MAJORIZATION_EPS) -> bool:
    """``d ≺ c``: every head partial sum of ``d`` is at most that of ``c`` (within ``eps``)."""
    n = max(d.probs.size, c.probs.size)
    return bool(np.all(np.cumsum(d.padded(n)) <= np.cumsum(c.padded(n)) + eps))


def mean_photon_number(lambda_mag: float) -> float:
    """Total photon number ``2 lam^2 / (1 - lam^2)`` of a TMSV with ``|lambda| = lambda_mag``."""
    if not 0.0 <= lambda_mag < 1.0:
        raise UnphysicalSqueezing(f"requires 0 <= |lambda| < 1, got {lambda_mag!r}")
    return 2 * lambda_mag ** 2 / (1 - lambda_mag ** 2)


def mean_photons(state: SchmidtDiagonalState) -> float:
    """``sum_n 2 n |c_n|^2`` over both modes."""
    return float(np.dot(2 * np.arange(state.cutoff.dim), state.probs))


def compare(input_state: SchmidtDiagonalState, output_state: SchmidtDiagonalState,
            eps: float = MAJORIZATION_EPS, base: float = 2.0) -> EntanglementVerdict:
    s_in, s_out = schmidt_spectrum(input_state), schmidt_spectrum(output_state)
    return EntanglementVerdict(
        majorized=majorizes(s_out, s_in, eps),
        entropy_in=von_neumann_entropy(s_in, base),
        entropy_out=von_neumann_entropy(s_out, base),
        purity_in=purity(s_in),
        purity_out=purity(s_out),
        mean_photons_in=mean_photons(input_state),
        mean_photons_out=mean_photons(output_state),
    )
