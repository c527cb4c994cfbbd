class LabError(Exception):
    """ラボ全体の基底例外"""


class LabValidationError(LabError, ValueError):
    """前提条件・値域の違反"""


class PhaseRangeError(LabValidationError):
    """厳密な位相の mod 1 簡約が表現範囲を超える"""


class BudgetExceededError(LabError):
    """設定された作業量を超える計算を拒否した"""

    def __init__(self, what: str, required: int, budget: int) -> None:
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: required work {required} exceeds budget {budget}")


class NumericalCheckError(LabError):
    """数値的に保証されるはずの不変量が破れた"""
