import math
from collections.abc import Sequence

import numpy as np

from weyl_lab.core import console
from weyl_lab.core.errors import LabValidationError, NumericalCheckError
from weyl_lab.core.services.parallel import partitioned_map
from weyl_lab.features.discrepancy.application.discrepancy import disc_exact, sequence_points
from weyl_lab.features.discrepancy.domain.models import KoksmaProbe, LadderPoint
from weyl_lab.features.weyl_core.application.weights import TWO_PI
from weyl_lab.features.weyl_core.domain.models import PhaseVector

KOKSMA_PANEL_SEED = 31
LADDER_PANEL_SEED = 47
DEFAULT_LADDER = tuple(2**k for k in range(8, 15))


def random_phase(rng: np.random.Generator, d: int) -> PhaseVector:
    coeffs = rng.random(d)
    coeffs[coeffs >= 1.0] = 0.0
    return PhaseVector(tuple(float(c) for c in coeffs))


def koksma_probe(x: PhaseVector, N: int) -> KoksmaProbe:
    """|S_d(x; N)| / D_d(x; N) (重みはすべて 1)"""
    points = sequence_points(x, N)
    magnitude = abs(complex(np.exp(TWO_PI * 1j * points).sum()))
    discrepancy = disc_exact(points).value
    if discrepancy <= 0:
        msg = f"discrepancy vanished for N={N}"
        raise NumericalCheckError(msg)
    return KoksmaProbe(magnitude, discrepancy, magnitude / discrepancy)


def koksma_panel(
    d: int = 3, N: int = 10_000, count: int = 50, seed: int = KOKSMA_PANEL_SEED, workers: int = 1
) -> list[KoksmaProbe]:
    rng = np.random.default_rng(seed)
    phases = [random_phase(rng, d) for _ in range(count)]

    def run(block: Sequence[PhaseVector]) -> list[KoksmaProbe]:
        return [koksma_probe(x, N) for x in block]

    return partitioned_map(run, phases, workers)


def disc_ladder(x: PhaseVector, Ns: Sequence[int]) -> list[LadderPoint]:
    """点列を一度だけ作り、各 N の先頭部分で D / sqrt(N) を求める"""
    if not Ns or min(Ns) < 1:
        msg = "ladder needs positive lengths"
        raise LabValidationError(msg)
    points = sequence_points(x, max(Ns))
    ladder = []
    for N in sorted(Ns):
        value = disc_exact(points[:N]).value
        ladder.append(LadderPoint(N, value, value / math.sqrt(N)))
    return ladder


def ladder_panel(
    d: int = 2,
    count: int = 200,
    Ns: Sequence[int] = DEFAULT_LADDER,
    floor: float = 0.1,
    seed: int = LADDER_PANEL_SEED,
    workers: int = 1,
) -> float:
    """min_N D/sqrt(N) >= floor となる x の割合 (記録のみ)"""
    rng = np.random.default_rng(seed)
    phases = [random_phase(rng, d) for _ in range(count)]

    def run(block: Sequence[PhaseVector]) -> list[float]:
        return [min(p.normalized for p in disc_ladder(x, Ns)) for x in block]

    minima = partitioned_map(run, phases, workers)
    fraction = sum(m >= floor for m in minima) / count
    console.info(f"ladder d={d}: min D/sqrt(N) >= {floor} on {fraction:.1%} of {count} points")
    return fraction
