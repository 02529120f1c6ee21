"""Work budgets shared by the enumeration, orbit and closure routines.

Defaults can be overridden with environment variables:

    GPCHECK_ENUM_BUDGET    max number of subspaces enumerated (default 10**7)
    GPCHECK_ORBIT_BUDGET   max size of a point domain / orbit   (default 10**7)
    GPCHECK_CLOSURE_CAP    max group size built by brute closure (default 10**6)
"""

import os

DEFAULT_ENUM_BUDGET = 10**7
DEFAULT_ORBIT_BUDGET = 10**7
DEFAULT_CLOSURE_CAP = 10**6


class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured size budget."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def enum_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("GPCHECK_ENUM_BUDGET", DEFAULT_ENUM_BUDGET)


def orbit_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("GPCHECK_ORBIT_BUDGET", DEFAULT_ORBIT_BUDGET)


def closure_cap(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("GPCHECK_CLOSURE_CAP", DEFAULT_CLOSURE_CAP)
