"""Brute-force reference computations.

Deliberately naive: these never use the filter-function reduction, the
Hermite recurrence or the head-sum majorization test they are used to check.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import eval_hermite

from .hilbert import FockVector


def tripartite_output(lam: float, kappa_T: float, pre: FockVector, post_row: np.ndarray, n_max_ab: int):
    """Contract the full A(x)B(x)C state with the post-selection bra.

    Builds ``|zeta(lam)>|Phi_1>`` as a dense vector on the three truncated
    modes, applies ``exp(-i kappa_T n_B n_C)`` element-wise, contracts mode C
    with ``post_row`` and normalises.  Returns ``(M, prob)`` where ``M[a, b]``
    is the normalised two-mode amplitude matrix.
    """
    d, m = n_max_ab + 1, pre.cutoff.dim
    n = np.arange(d)
    psi_ab = np.diag(math.sqrt(1 - lam ** 2) * np.power(float(lam), n)).astype(complex)
    psi = np.kron(psi_ab.ravel(), pre.amps)
    n_b = np.kron(np.kron(np.ones(d), n), np.ones(m))
    n_c = np.kron(np.ones(d * d), np.arange(m))
    psi = np.exp(-1j * kappa_T * n_b * n_c) * psi
    out = (psi.reshape(d * d, m) @ np.asarray(post_row)[:m]).reshape(d, d)
    prob = float(np.sum(np.abs(out) ** 2))
    return out / math.sqrt(prob), prob


def reduced_spectrum(amplitudes: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of ``rho_A = M M^dagger``."""
    rho = amplitudes @ amplitudes.conj().T
    return np.sort(np.clip(np.linalg.eigvalsh(rho), 0, None))[::-1]


def hermite_function_direct(x: float, n: int) -> float:
    """``H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))`` straight from the factorial formula."""
    return float(eval_hermite(n, x) * math.exp(-x * x / 2) / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi)))


def majorized_by_tail_sums(d: np.ndarray, c: np.ndarray, eps: float = 1e-9) -> bool:
    """``d ≺ c`` via tail sums: ``sum_{k>=l} d_k >= sum_{k>=l} c_k`` for every ``l``."""
    n = max(len(d), len(c))
    dd = np.zeros(n)
    cc = np.zeros(n)
    dd[:len(d)] = np.sort(d)[::-1]
    cc[:len(c)] = np.sort(c)[::-1]
    for ell in range(n):
        if dd[ell:].sum() < cc[ell:].sum() - eps:
            return False
    return True


def random_majorized_pair(rng: np.random.Generator, size: int, transforms: int = 6):
    """A random probability vector ``c`` and ``d = T c`` for a product of random T-transforms.

    Each T-transform averages two entries, so ``d ≺ c`` holds by construction.
    Both are returned sorted in descending order.
    """
    c = rng.dirichlet(np.full(size, rng.uniform(0.2, 2.0)))
    d = c.copy()
    for _ in range(transforms):
        i, j = rng.choice(size, 2, replace=False)
        t = rng.uniform()
        di, dj = d[i], d[j]
        d[i], d[j] = t * di + (1 - t) * dj, (1 - t) * di + t * dj
    return np.sort(d)[::-1], np.sort(c)[::-1]
