"""
3 進有理点のまわりの区間の和集合 A の測度と局所密度。

世代 n の区間は a/3^n を中心とする半径 r_n = 3^{-n-2} n^{-2} の区間。
中心数が上限に収まる世代までは和集合を厳密に求め、残りの世代は長さの和で上から抑える。
"""

import math

import numpy as np

from weyl_lab.core import console
from weyl_lab.core.domain.interval import Interval
from weyl_lab.core.errors import LabValidationError
from weyl_lab.features.measure_scan.domain.models import CounterexampleA

MAX_CENTRES = 1 << 22
_BRACKET_SEARCH = 4096


def generation_radius(n: int) -> float:
    return 3.0 ** (-n - 2) / (n * n)


def series_bound(n_max: int) -> float:
    """(2/9) sum_{n<=n_max} n^{-2} + (2/9) / n_max (尾部)"""
    n = np.arange(1, n_max + 1, dtype=np.float64)
    return float(2.0 / 9.0 * (np.sum(1.0 / n[::-1] ** 2) + 1.0 / n_max))


def bracket_generation(delta: float) -> int | None:
    """3^{-n} n^3 <= δ < 3^{-n+1} (n-1)^3 を満たす n (n >= 4 で単調)"""
    if not 0 < delta < 1:
        return None
    previous = 3.0**-3 * 27
    for n in range(4, _BRACKET_SEARCH):
        current = 3.0**-n * n**3
        if current <= delta < previous:
            return n
        previous = current
    return None


def resolved_generations(probe: Interval, n_max: int) -> int:
    """中心の総数が MAX_CENTRES に収まる最大の世代"""
    total = 0
    for n in range(1, n_max + 1):
        total += math.ceil(probe.length * 3**n) + 2
        if total > MAX_CENTRES:
            return n - 1
    return n_max


def union_measure(probe: Interval, generations: int) -> float:
    """世代 1..generations の区間の和集合と probe の共通部分の長さ"""
    lows, highs = [], []
    for n in range(1, generations + 1):
        r = generation_radius(n)
        scale = 3**n
        first = math.ceil((probe.start - r) * scale)
        last = math.floor((probe.end + r) * scale)
        centres = np.arange(first, last + 1, dtype=np.float64) / scale
        lows.append(np.maximum(centres - r, probe.start))
        highs.append(np.minimum(centres + r, probe.end))
    if not lows:
        return 0.0

    low = np.concatenate(lows)
    high = np.concatenate(highs)
    keep = high > low
    order = np.argsort(low[keep], kind="stable")
    low, high = low[keep][order], high[keep][order]
    reach = np.concatenate([[-np.inf], np.maximum.accumulate(high)[:-1]])
    return float(np.clip(high - np.maximum(low, reach), 0.0, None).sum())


def _tail_bound(length: float, generations: int, n_max: int) -> float:
    """世代 generations+1 以降の区間の長さの和"""
    # (length 3^n + 2) 2 r_n = (2 length / 9 + 4 3^{-n-2}) / n^2
    total = 0.0
    for n in range(generations + 1, n_max + 1):
        total += (2.0 / 9.0 * length + 4.0 * 3.0 ** (-n - 2)) / (n * n)
    rest = 2.0 / 9.0 * length + 4.0 * 3.0 ** (-n_max - 2)
    return total + rest / n_max


def counterexample_A(n_max: int, probe: Interval) -> CounterexampleA:
    """
    λ(A) の上界と、probe 上の密度 λ(A ∩ J) / λ(J) の評価。

    probe が T 全体なら密度は測度の評価値と一致する。
    """
    if n_max < 2:  # noqa: PLR2004
        msg = f"n_max must be >= 2, got {n_max}"
        raise LabValidationError(msg)
    if not (probe.is_torus and probe.end <= 1.0):
        msg = f"probe must lie in [0, 1], got [{probe.start}, {probe.end}]"
        raise LabValidationError(msg)

    torus = Interval.full()
    torus_generations = resolved_generations(torus, n_max)
    measure = union_measure(torus, torus_generations)

    if probe == torus:
        generations, inside = torus_generations, measure
    else:
        generations = resolved_generations(probe, n_max)
        inside = union_measure(probe, generations)
    tail = _tail_bound(probe.length, generations, n_max)

    delta = probe.length
    log_scale = math.log(1.0 / delta) ** -2 if delta < 1 else 0.0
    result = CounterexampleA(
        measure_bound=series_bound(n_max),
        measure_estimate=measure,
        density=inside / delta,
        density_upper=min(1.0, (inside + tail) / delta),
        generations=generations,
        bracket=bracket_generation(delta),
        log_scale=log_scale,
    )
    if log_scale > 0:
        console.info(
            f"density {result.density:.4g} on a probe of length {delta:.3g}"
            f" ({result.scaled_density:.3g} x (log 1/delta)^-2, bracket n={result.bracket})"
        )
    return result
