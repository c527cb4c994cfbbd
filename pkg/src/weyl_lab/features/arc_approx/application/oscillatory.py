import math
from collections.abc import Sequence

import numpy as np
from scipy.integrate import simpson

from weyl_lab.core.constants import DEFAULT_QUADRATURE_NODES
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.budget import check_budget
from weyl_lab.features.weyl_core.application.weights import TWO_PI

NODES_PER_TURN = 50
MAX_STEP = 0.25
CHUNK_INTERVALS = 1 << 20  # 偶数


def quadrature_step(xivec: Sequence[float], N: int) -> float:
    """位相の微分 sum i xi_i g^{i-1} の [0,N] 上の上界から刻み幅を決める"""
    slope = sum(i * abs(xi) * float(N) ** (i - 1) for i, xi in enumerate(xivec, start=1))
    if slope == 0:
        return MAX_STEP
    return min(MAX_STEP, 1.0 / (NODES_PER_TURN * slope))


def _phase(xivec: Sequence[float], g: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(g)
    for xi in reversed(xivec):
        acc = (acc + xi) * g
    return acc


def oscillatory_integral(
    xivec: Sequence[float], N: int, max_nodes: int = DEFAULT_QUADRATURE_NODES
) -> complex:
    """int_0^N e(xi_d g^d + ... + xi_1 g) dg (合成 Simpson 則)"""
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    if not any(xivec):
        return complex(N)

    intervals = math.ceil(N / quadrature_step(xivec, N))
    intervals += intervals % 2
    check_budget("quadrature nodes", intervals + 1, max_nodes)
    h = N / intervals

    total = 0j
    for i0 in range(0, intervals, CHUNK_INTERVALS):
        i1 = min(intervals, i0 + CHUNK_INTERVALS)
        g = np.arange(i0, i1 + 1, dtype=np.float64) * h
        values = np.exp(TWO_PI * 1j * _phase(xivec, g))
        total += complex(simpson(values, dx=h))
    return total


def linear_closed_form(t: float, N: int) -> complex:
    """int_0^N e(t g) dg"""
    if t == 0:
        return complex(N)
    return complex((np.exp(TWO_PI * 1j * t * N) - 1.0) / (TWO_PI * 1j * t))
