import math
from collections.abc import Sequence

import numpy as np
from sympy import divisors

from weyl_lab.core import console
from weyl_lab.core.domain.lab_config import resolve_spectrum_budget
from weyl_lab.core.errors import LabValidationError
from weyl_lab.core.services.budget import check_budget
from weyl_lab.core.services.parallel import partitioned_map
from weyl_lab.features.rep_count.application.spectrum import (
    PairSpectrum,
    build_difference_spectrum,
    build_pair_spectrum,
    build_quadratic_spectrum,
)
from weyl_lab.features.rep_count.domain.models import (
    NondiagProfile,
    PairSystemQuery,
    PowerPairs,
    RepCount,
    RepQuery,
)


def diagonal_count(N: int) -> int:
    """{n1, n2} = {n3, n4} となる4つ組の個数 2N^2 - N"""
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    return 2 * N * N - N


def r_count(
    q: RepQuery, spectrum: PairSpectrum | None = None, spectrum_budget: int | None = None
) -> RepCount:
    """R_d(k, N) = sum_s P(s) P(s - k)"""
    if not q.in_range:
        return RepCount(0, 0)
    spec = spectrum if spectrum is not None else build_pair_spectrum(q.d, q.N, spectrum_budget)
    diagonal = diagonal_count(q.N) if q.k == 0 else 0
    return RepCount(spec.shift_join(q.k), diagonal)


def q_count(q: PairSystemQuery, spectrum_budget: int | None = None) -> RepCount:
    """
    Q(k, m, N): 1次と2次の連立の解の個数。

    (和, 平方和) は対の多重集合を決めるので、対角 (多重集合が等しい) は (k, m) = (0, 0) のときだけ。
    """
    spec, base = build_quadratic_spectrum(q.N, spectrum_budget)
    u, v = spec.values // base, spec.values % base
    target_u, target_v = u - q.k, v - q.m
    valid = (target_v >= 0) & (target_v < base) & (target_u >= 0)
    keys = target_u[valid] * base + target_v[valid]
    pos = np.searchsorted(spec.values, keys)
    inside = pos < spec.size
    hit = np.zeros(keys.size, dtype=bool)
    hit[inside] = spec.values[pos[inside]] == keys[inside]

    total = int(np.dot(spec.counts[valid][hit], spec.counts[pos[hit]]))
    diagonal = diagonal_count(q.N) if (q.k, q.m) == (0, 0) else 0
    return RepCount(total, diagonal)


def power_pair_count(d: int, k: int, N: int) -> PowerPairs:
    """
    m^d = n^d + k となる (m, n) in [1,N]^2 を列挙する。

    e = |m - n| は |k| の約数なので、各 e について (x + e)^d - x^d = |k| を二分探索で解く。
    """
    if k == 0:
        msg = "power_pair_count needs k != 0"
        raise LabValidationError(msg)
    if d < 2:  # noqa: PLR2004
        msg = f"degree d must be >= 2, got {d}"
        raise LabValidationError(msg)

    target = abs(k)
    pairs: list[tuple[int, int]] = []
    if target < N**d:
        for e in divisors(target):
            if e >= N:
                break
            lo, hi = 1, N - e
            while lo < hi:
                mid = (lo + hi) // 2
                if (mid + e) ** d - mid**d < target:
                    lo = mid + 1
                else:
                    hi = mid
            if (lo + e) ** d - lo**d == target:
                pairs.append((lo + e, lo) if k > 0 else (lo, lo + e))
    pairs.sort()
    return PowerPairs(len(pairs), tuple(pairs))


def nondiag_profile(
    d: int,
    N: int,
    shifts: Sequence[int],
    workers: int = 1,
    spectrum_budget: int | None = None,
) -> NondiagProfile:
    """標本 k != 0 ごとの R_d(k, N) と最大値の指数 log(max)/log(N)"""
    if any(k == 0 for k in shifts):
        msg = "nondiag_profile samples must be nonzero shifts"
        raise LabValidationError(msg)
    spec = build_pair_spectrum(d, N, spectrum_budget)

    def run(block: Sequence[int]) -> list[int]:
        return [r_count(RepQuery(d, k, N), spec).total for k in block]

    counts = partitioned_map(run, list(shifts), workers)
    best = max(counts, default=0)
    argmax = shifts[counts.index(best)] if counts else None
    exponent = math.log(best) / math.log(N) if best > 0 and N > 1 else None
    console.info(f"R_{d}(k,{N}) profile: max {best} over {len(counts)} shifts, exponent {exponent}")
    return NondiagProfile(d, N, tuple(shifts), tuple(counts), best, argmax, exponent)


def sample_shifts(
    d: int,
    N: int,
    count: int,
    seed: int,
    extra: Sequence[int] = (),
    spectrum_budget: int | None = None,
) -> list[int]:
    """
    実際に現れる差 k = s - s' (k != 0) を対数一様に層化して count 個選ぶ。

    層 j では目標 T = (2N^d)^{(j+u)/count} に最も近い差を、ランダムな s から探す。
    extra は重複を除いて併合する。
    """
    spec = build_pair_spectrum(d, N, spectrum_budget)
    rng = np.random.default_rng(seed)
    span = math.log(2.0 * float(N) ** d)
    chosen: set[int] = {int(k) for k in extra if k != 0}
    for j in range(count):
        magnitude = math.exp(span * (j + rng.random()) / count)
        for _ in range(64):
            s = spec.values[rng.integers(spec.size)]
            pos = int(np.searchsorted(spec.values, s - round(magnitude)))
            pos = min(pos, spec.size - 1)
            k = int(s - spec.values[pos])
            if k != 0:
                chosen.add(k)
                break
    return sorted(chosen)


def quartic_shift_count(k: int, N: int, spectrum_budget: int | None = None) -> int:
    """x1^4 - x2^4 = x3^4 - x4^4 + k の解の個数 (差のスペクトル D で sum_t D(t) D(t - k))"""
    if N < 1:
        msg = f"N must be >= 1, got {N}"
        raise LabValidationError(msg)
    return build_difference_spectrum(4, N, spectrum_budget).shift_join(k)


def shift_distribution(
    d: int, N: int, spectrum_budget: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """全ての k についての R_d(k, N) (総和は N^4)"""
    spec = build_pair_spectrum(d, N, spectrum_budget)
    check_budget("shift distribution", spec.size**2, resolve_spectrum_budget(spectrum_budget))
    shifts = np.subtract.outer(spec.values, spec.values).ravel()
    weights = np.outer(spec.counts, spec.counts).ravel()
    uniq, inverse = np.unique(shifts, return_inverse=True)
    counts = np.bincount(inverse.ravel(), weights=weights, minlength=uniq.size)
    return uniq, np.rint(counts).astype(np.int64)


def full_nondiag_profile(d: int, N: int, spectrum_budget: int | None = None) -> NondiagProfile:
    """標本を取らず、現れる全ての k != 0 で R_d(k, N) を数える"""
    shifts, counts = shift_distribution(d, N, spectrum_budget)
    nonzero = shifts != 0
    shifts, counts = shifts[nonzero], counts[nonzero]
    if counts.size == 0:
        return NondiagProfile(d, N, (), (), 0, None, None)
    pos = int(np.argmax(counts))
    best = int(counts[pos])
    exponent = math.log(best) / math.log(N) if N > 1 else None
    console.info(f"R_{d}(k,{N}) full profile: max {best} over {counts.size} shifts")
    return NondiagProfile(
        d, N, tuple(shifts.tolist()), tuple(counts.tolist()), best, int(shifts[pos]), exponent
    )
