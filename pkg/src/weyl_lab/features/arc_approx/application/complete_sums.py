"""分母 q の完全和と、x = a/q + xi での直接和 (剰余は整数で厳密に扱う)"""

from collections.abc import Sequence

import numpy as np

from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.weyl_core.application.phase_arith import frac_mul, power_frequencies
from weyl_lab.features.weyl_core.application.weights import TWO_PI


def _residue_phase(avec: Sequence[int], n: np.ndarray, q: int) -> np.ndarray:
    """(a_1 n + ... + a_d n^d) mod q を整数で"""
    acc = np.zeros(n.shape, dtype=np.int64)
    power = np.ones(n.shape, dtype=np.int64)
    base = n % q
    for a in avec:
        power = (power * base) % q
        acc = (acc + (a % q) * power) % q
    return acc


def complete_sum(avec: Sequence[int], q: int) -> complex:
    """S_d(avec/q; q) = sum_{r=1}^{q} e((a_1 r + ... + a_d r^d) / q)"""
    if q < 1:
        msg = f"q must be >= 1, got {q}"
        raise LabValidationError(msg)
    r = np.arange(1, q + 1, dtype=np.int64)
    return complex(np.exp(TWO_PI * 1j * _residue_phase(avec, r, q) / q).sum())


def gauss_sum(a: int, q: int, d: int) -> complex:
    """sigma_d(a/q; q)"""
    return complete_sum((0,) * (d - 1) + (a,), q)


def polynomial_direct(avec: Sequence[int], q: int, xivec: Sequence[float], N: int) -> complex:
    """sum_{n<=N} e(sum_i (a_i/q + xi_i) n^i)"""
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    n = np.arange(1, N + 1, dtype=np.int64)
    phase = _residue_phase(avec, n, q) / q
    for i, xi in enumerate(xivec, start=1):
        if xi:
            phase = phase + frac_mul(xi, power_frequencies(i, n))
    return complex(np.exp(TWO_PI * 1j * phase).sum())


def major_arc_direct(a: int, q: int, xi: float, d: int, N: int) -> complex:
    """sum_{n<=N} e(a n^d / q) e(xi n^d)"""
    return polynomial_direct((0,) * (d - 1) + (a,), q, (0.0,) * (d - 1) + (xi,), N)
