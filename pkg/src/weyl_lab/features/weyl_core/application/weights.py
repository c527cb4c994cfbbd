import numpy as np

from weyl_lab.features.weyl_core.application.phase_arith import polynomial_phases
from weyl_lab.features.weyl_core.domain.models import WeightMode, WeightSeq

# Philox4x64 は 1 カウンタあたり 4 語を出すので、a_n はブロック (n-1)//4 のレーン (n-1)%4
_LANES = 4
_UNIT = 2.0**-53
TWO_PI = 2.0 * np.pi


def unit_phases(seed: int, start: int, count: int) -> np.ndarray:
    """(seed, n) で決まる [0,1) の一様乱数 u_n を n = start..start+count-1 について返す"""
    if count <= 0:
        return np.zeros(0, dtype=np.float64)
    first = start - 1
    first_block, offset = divmod(first, _LANES)
    n_blocks = -(-(offset + count) // _LANES)

    bitgen = np.random.Philox(counter=first_block, key=seed)
    raw = bitgen.random_raw(_LANES * n_blocks)
    raw = np.asarray(raw, dtype=np.uint64)[offset : offset + count]
    return (raw >> np.uint64(11)).astype(np.float64) * _UNIT


def weight_values(weights: WeightSeq, count: int, start: int = 1) -> np.ndarray:
    """a_n (n = start, ..., start+count-1) を複素配列で返す"""
    match weights.mode:
        case WeightMode.ONES:
            return np.ones(count, dtype=np.complex128)
        case WeightMode.RANDOM:
            assert weights.seed is not None
            return np.exp(TWO_PI * 1j * unit_phases(weights.seed, start, count))
        case WeightMode.REDUCTION:
            assert weights.twist is not None
            base = weight_values(weights.base or WeightSeq.ones(), count, start)
            n = np.arange(start, start + count, dtype=np.int64)
            coeffs = np.array([weights.twist.coeffs])
            return base * np.exp(TWO_PI * 1j * polynomial_phases(coeffs, n)[0])
    msg = f"unknown weight mode {weights.mode}"
    raise ValueError(msg)
