"""
位相の mod 1 簡約。

倍精度の x を 26 ビットずつの整数チャンクに分解し、整数 m = n^d を 26 ビットのリムに分解して
x*m の小数部分だけを積み上げる。整数部分になる項は最初から計算しないので、n^d が 2^63 を
大きく超えても (|m| < 2^104) 位相を倍精度の丸め程度の誤差で求められる。
"""

import numpy as np

from weyl_lab.core.errors import PhaseRangeError

LIMB_BITS = 26
LIMB_BASE = 1 << LIMB_BITS
LIMB_MASK = LIMB_BASE - 1
N_LIMBS = 4  # |m| < 2^104
N_CHUNKS = 6  # x の上位 156 ビット
MAX_BASE = LIMB_BASE  # n < 2^26
MAX_MAGNITUDE = 1 << (LIMB_BITS * N_LIMBS)

_CHUNK_SCALE = [2.0 ** (-LIMB_BITS * s) for s in range(N_CHUNKS + 2)]


def split_fraction(xs: np.ndarray) -> np.ndarray:
    """x mod 1 を 26 ビットチャンク c_j に分解する (x = sum c_j 2^{-26(j+1)} + 微小量)"""
    r = np.mod(np.asarray(xs, dtype=np.float64), 1.0)
    chunks = np.empty((*r.shape, N_CHUNKS), dtype=np.int64)
    for j in range(N_CHUNKS):
        r = r * float(LIMB_BASE)
        c = np.floor(r)
        chunks[..., j] = c.astype(np.int64)
        r = r - c
    return chunks


def int_to_limbs(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """整数配列を (符号, リム[4, L]) に分解する。int64 以外は Python int 経由"""
    arr = np.asarray(m)
    if arr.dtype.kind in "iu":
        values = arr.astype(np.int64)
        sign = np.sign(values)
        mag = np.abs(values)
        limbs = np.stack([(mag >> (LIMB_BITS * k)) & LIMB_MASK for k in range(N_LIMBS)])
        return sign, limbs

    flat = [int(v) for v in arr.ravel()]
    if any(abs(v) >= MAX_MAGNITUDE for v in flat):
        msg = "integer frequency beyond 2^104 cannot be reduced exactly"
        raise PhaseRangeError(msg)
    sign = np.array([(v > 0) - (v < 0) for v in flat], dtype=np.int64).reshape(arr.shape)
    limbs = np.array(
        [[(abs(v) >> (LIMB_BITS * k)) & LIMB_MASK for v in flat] for k in range(N_LIMBS)],
        dtype=np.int64,
    ).reshape((N_LIMBS, *arr.shape))
    return sign, limbs


def power_limbs(n: np.ndarray, degree: int) -> list[np.ndarray]:
    """n, n^2, ..., n^degree のリム表現 (各要素 [4, L])"""
    base = np.asarray(n, dtype=np.int64)
    if base.size and (base.min() < 0 or base.max() >= MAX_BASE):
        msg = f"exact phase reduction needs 0 <= n < 2^{LIMB_BITS}"
        raise PhaseRangeError(msg)

    current = np.zeros((N_LIMBS, *base.shape), dtype=np.int64)
    current[0] = 1
    powers = []
    for i in range(1, degree + 1):
        nxt = np.empty_like(current)
        carry = np.zeros(base.shape, dtype=np.int64)
        for k in range(N_LIMBS):
            t = current[k] * base + carry
            nxt[k] = t & LIMB_MASK
            carry = t >> LIMB_BITS
        if np.any(carry):
            msg = f"n^{i} exceeds 2^{LIMB_BITS * N_LIMBS}; exact phase reduction refused"
            raise PhaseRangeError(msg)
        powers.append(nxt)
        current = nxt
    return powers


def frac_from_limbs(chunks: np.ndarray, limbs: np.ndarray) -> np.ndarray:
    """
    frac(x_g * m_l) を [G, L] で返す。

    chunks: [G, N_CHUNKS] (split_fraction の結果), limbs: [N_LIMBS, L]
    """
    acc = np.zeros((chunks.shape[0], limbs.shape[1]), dtype=np.float64)
    for j in range(N_CHUNKS):
        c = chunks[:, j : j + 1]
        if not c.any():
            continue
        for k in range(min(j, N_LIMBS - 1) + 1):
            shift = j - k + 1
            prod = c * limbs[k][None, :]  # < 2^52
            if shift == 1:
                acc += (prod & LIMB_MASK) * _CHUNK_SCALE[1]
            else:
                acc += prod * _CHUNK_SCALE[shift]
    out = np.mod(acc, 1.0)
    out[out >= 1.0] = 0.0
    return out


def frac_mul(x: float, m: np.ndarray) -> np.ndarray:
    """frac(x * m) を整数配列 m (|m| < 2^104) について厳密に近い精度で求める"""
    arr = np.asarray(m)
    sign, limbs = int_to_limbs(arr)
    flat_limbs = limbs.reshape(N_LIMBS, -1)
    value = frac_from_limbs(split_fraction(np.array([x])), flat_limbs)[0].reshape(arr.shape)
    value = np.where(sign < 0, np.mod(-value, 1.0), value)
    value[value >= 1.0] = 0.0
    return np.where(sign == 0, 0.0, value)


def polynomial_phases(coeffs: np.ndarray, n: np.ndarray) -> np.ndarray:
    """
    係数行列 coeffs [G, D] (列 i が n^{i+1} の係数) の多項式位相を [G, L] で返す。
    """
    coeff_arr = np.atleast_2d(np.asarray(coeffs, dtype=np.float64))
    n_arr = np.asarray(n, dtype=np.int64)
    powers = power_limbs(n_arr, coeff_arr.shape[1])

    acc = np.zeros((coeff_arr.shape[0], n_arr.size), dtype=np.float64)
    for i, limbs in enumerate(powers):
        column = coeff_arr[:, i]
        if not column.any():
            continue
        acc += frac_from_limbs(split_fraction(column), limbs.reshape(N_LIMBS, -1))
    out = np.mod(acc, 1.0)
    out[out >= 1.0] = 0.0
    return out


def power_frequencies(gamma: float, n: np.ndarray) -> np.ndarray:
    """f(n) = n^gamma。整数 gamma は int64 (範囲外は Python int), それ以外は float"""
    n_arr = np.asarray(n, dtype=np.int64)
    if not float(gamma).is_integer():
        return np.power(n_arr.astype(np.float64), gamma)

    d = int(gamma)
    top = int(n_arr.max()) if n_arr.size else 0
    if top ** d < 2**62:
        return n_arr**d
    return np.array([int(v) ** d for v in n_arr.tolist()], dtype=object)
