"""Expected-time optimal activation sequences on influence networks."""

from ._core import *  # noqa: F401,F403
from ._core import (
    DiffusionInstance,
    Edge,
    InfluenceNetwork,
    SolveResult,
    dp_optimal,
    sequence_time,
)

__version__ = "0.1.0"


def unit_network(n, pairs):
    """Network on n nodes with weight 1 in both directions of every pair."""
    return InfluenceNetwork(n, [Edge(u, v, 1.0, 1.0) for u, v in pairs])


def solve(instance, solver="dp", **kwargs):
    """Dispatch by solver name, mirroring the command-line tool."""
    from . import _core

    table = {
        "brute": _core.brute_force_optimal,
        "dp": _core.dp_optimal,
        "greedy": _core.greedy_sequence,
        "majority": _core.majority_sequence,
        "tw-full": _core.tw_full_optimal,
        "tw-partial": _core.tw_partial_optimal,
        "decompose-dp": _core.solve_full_via_decomposition,
    }
    if solver not in table:
        raise ValueError(f"unknown solver {solver!r}")
    return table[solver](instance, **kwargs)
