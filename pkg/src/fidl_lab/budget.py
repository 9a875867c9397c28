"""Size guards for the exponential enumerations.

``FIDL_BUDGET_OVERRIDE`` (an integer) raises every limit to at least that
value.
"""
import os

from .errors import BudgetExceeded

DEFAULTS = {
    # carrier size of constructed lattices (products, powers, upset lattices)
    "lattice": 4096,
    # partition-based congruence oracle
    "partition_a": 6,
    "partition_b": 5,
    # spectrum-based congruence oracle, per sort
    "spectral": 12,
    # |X| + |Y| for exhaustive closed-pair enumeration
    "closed_pairs": 14,
}


def limit(name):
    value = DEFAULTS[name]
    override = os.environ.get("FIDL_BUDGET_OVERRIDE")
    if override:
        try:
            value = max(value, int(override))
        except ValueError:
            pass
    return value


def require(name, size, what=None):
    bound = limit(name)
    if size > bound:
        raise BudgetExceeded(
            f"{what or name} has size {size}, budget is {bound}",
            budget=name, size=size, limit=bound,
        )
