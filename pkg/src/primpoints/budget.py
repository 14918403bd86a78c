"""Work-budget accounting for exhaustive loops."""

from __future__ import annotations

import os

ENV_VAR = "PRIMPOINTS_WORK_BUDGET"
DEFAULT_WORK_BUDGET = 10**10


class BudgetExceeded(RuntimeError):
    """Raised before starting a computation whose cost exceeds the budget."""


def work_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_WORK_BUDGET
    try:
        return int(float(raw))
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be numeric, got {raw!r}") from None


def check_budget(cost: float, what: str, budget: int | None = None) -> None:
    limit = work_budget() if budget is None else budget
    if cost > limit:
        raise BudgetExceeded(f"{what}: estimated {cost:.3g} field operations exceeds budget {limit:.3g}")
