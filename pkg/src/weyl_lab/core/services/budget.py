from weyl_lab.core.errors import BudgetExceededError


def check_budget(what: str, required: int, budget: int) -> None:
    """作業量が上限を超えていれば BudgetExceededError (黙って打ち切らない)"""
    if required > budget:
        raise BudgetExceededError(what, int(required), int(budget))
