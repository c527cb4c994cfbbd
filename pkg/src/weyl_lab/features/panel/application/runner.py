import time
from collections.abc import Sequence

from weyl_lab.core import console
from weyl_lab.core.errors import LabError, LabValidationError
from weyl_lab.features.panel.application.criteria import CRITERIA
from weyl_lab.features.panel.domain.models import (
    Criterion,
    CriterionResult,
    Outcome,
    PanelContext,
    PanelSummary,
)


def select_criteria(
    only: Sequence[str] | None = None, criteria: Sequence[Criterion] = CRITERIA
) -> list[Criterion]:
    """only はグループ名または項目名 (空なら全項目)"""
    if not only:
        return list(criteria)
    known = {c.group for c in criteria} | {c.name for c in criteria}
    unknown = sorted(set(only) - known)
    if unknown:
        msg = f"unknown panel criteria or groups: {', '.join(unknown)}"
        raise LabValidationError(msg)
    return [c for c in criteria if c.group in only or c.name in only]


def run_criterion(criterion: Criterion, ctx: PanelContext) -> CriterionResult:
    start = time.perf_counter()
    try:
        outcome = criterion.check(ctx)
    except LabError as e:
        outcome = Outcome(False, {}, f"{type(e).__name__}: {e}")
    elapsed = time.perf_counter() - start

    console.verdict(criterion.name, outcome.passed, outcome.detail or f"{elapsed:.1f} s")
    return CriterionResult(
        name=criterion.name,
        group=criterion.group,
        passed=outcome.passed,
        measured=outcome.measured,
        detail=outcome.detail,
        wall_time=elapsed,
    )


def run_panel(
    ctx: PanelContext,
    only: Sequence[str] | None = None,
    criteria: Sequence[Criterion] = CRITERIA,
) -> PanelSummary:
    selected = select_criteria(only, criteria)
    console.info(f"panel: {len(selected)} criteria ({', '.join(c.name for c in selected)})")
    summary = PanelSummary(tuple(run_criterion(c, ctx) for c in selected))
    if not summary.passed:
        console.error(f"panel failed: {', '.join(summary.failures)}")
    return summary
