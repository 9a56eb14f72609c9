"""Desk-scale boundedness verdicts.

Every classification in this package ultimately asks whether some
nonnegative sequence a_n is bounded.  At desk scale only finitely many
indices are available, so boundedness is decided by a head-versus-tail
margin rule: the tail of log a_n may not exceed the maximum over the
head by more than a tolerance tau.  Verdicts carry their parameters and
are always labelled desk-scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

NEG_INF = float("-inf")


@dataclass(frozen=True)
class DeskParams:
    """Default grids and tolerances shared by the classifiers and the CLI."""

    h_grid: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
    lambda_grid: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
    tau: float = 0.5
    n_max: int = 64
    k_max: int = 4096


DEFAULTS = DeskParams()


def bounded_test(log_values, tau: float = DEFAULTS.tau):
    """Head-versus-tail boundedness decision on a sequence of log magnitudes.

    The head is n <= n0 with n0 = max(8, n_max // 8); the sequence is
    declared bounded iff max over the tail does not exceed the head
    maximum by more than tau.  Entries equal to -inf (zero magnitudes)
    satisfy every bound.  Returns (bounded, margin, witness_n, baseline).
    """
    e = np.asarray(log_values, dtype=float)
    n_max = len(e) - 1
    n0 = max(8, n_max // 8)
    head = e[: min(n0, n_max) + 1]
    tail = e[n0 + 1 :]
    baseline = float(np.max(head)) if head.size else NEG_INF
    if tail.size == 0:
        return True, NEG_INF, None, baseline
    tail_max = float(np.max(tail))
    if tail_max == NEG_INF:
        return True, NEG_INF, None, baseline
    witness = int(n0 + 1 + int(np.argmax(tail)))
    if tail_max == math.inf or baseline == math.inf:
        # an overflowed entry anywhere is never evidence of boundedness
        return False, math.inf, witness, baseline
    if baseline == NEG_INF:
        # finite tail over an identically-zero head is unbounded growth
        return False, math.inf, witness, baseline
    margin = tail_max - baseline
    return margin <= tau, margin, witness, baseline


@dataclass(frozen=True)
class GrowthVerdict:
    """Outcome of a desk-scale boundedness test over a quantifier pattern.

    margin is the tail excess over the head baseline in log scale,
    combined across the grid according to the quantifier pattern; the
    invariant margin <= tau iff bounded holds by construction.
    """

    bounded: bool
    margin: float
    witness_n: int | None
    grid: dict[str, Any]
    method: str
    tau: float = DEFAULTS.tau
    details: dict[str, Any] = field(default_factory=dict, repr=False)
    desk_scale: bool = True

    def to_json(self) -> dict[str, Any]:
        return {
            "bounded": self.bounded,
            "margin": json_float(self.margin),
            "witness_n": self.witness_n,
            "grid": self.grid,
            "method": self.method,
            "tau": self.tau,
            "desk_scale": True,
        }


def json_float(x):
    """JSON has no inf/nan; map non-finite floats to strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return repr(x)


def combine_margins(margins: np.ndarray, outer: str, inner: str) -> float:
    """Reduce a (outer, inner) margin matrix per the quantifier pattern.

    'forall' reduces with max (every grid point must pass), 'exists'
    with min (one witness suffices).
    """
    red = {"forall": np.max, "exists": np.min}
    inner_red = red[inner](margins, axis=1)
    return float(red[outer](inner_red))


def profile_verdict(ks, log_values, tau: float, grid: dict, method: str) -> GrowthVerdict:
    """Boundedness of a symmetric coefficient profile, folded to |k| ascending."""
    ks = np.asarray(ks)
    order = np.argsort(np.abs(ks), kind="stable")
    ok, margin, w, _ = bounded_test(np.asarray(log_values)[order], tau)
    witness = int(np.abs(ks)[order][w]) if w is not None else None
    return GrowthVerdict(
        bounded=ok, margin=margin, witness_n=witness, grid=grid, method=method, tau=tau
    )
