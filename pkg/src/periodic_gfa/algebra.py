"""Nets of trigonometric polynomials and their growth classification.

A Net is an indexed family n -> TrigPoly representing an element of the
generalized-function algebra: the algebra itself is (moderate nets)
modulo (negligible nets).  The defining suprema over n and over the
norm parameters h, lambda are decided at desk scale by the
head-versus-tail rule of verdict.bounded_test over finite grids; every
verdict records its grid and tolerance and is labelled desk-scale.

Quantifier patterns follow the class conventions exactly:

    moderate    Beurling: forall h exists lambda   Roumieu: forall lambda exists h
    negligible  Beurling: forall h forall lambda   Roumieu: exists lambda exists h

with the weighted quantity ||f_n||_h e^{-M(lambda n)} (moderate) or
||f_n||_h e^{+M(lambda n)} (negligible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .series import (
    TrigPoly,
    evaluate,
    log_coef_seminorm,
    log_ud_norm,
    log_ud_norm_rj,
    multiply,
    sup_norm_argmax,
)
from .verdict import DEFAULTS, GrowthVerdict, bounded_test
from .weights import RSequence, WeightSequence, associated_gauge, modified_weights


class GeneratorFail(RuntimeError):
    """A net generator raised at a probed index."""


class HypothesisFail(RuntimeError):
    """An operation requiring an established moderate verdict was called without one."""


class NoWitness(RuntimeError):
    """No failure witness exists: the net is negligible at the requested rate."""


@dataclass
class Net:
    """Lazily evaluated, memoized family n -> TrigPoly for n = 0..n_max."""

    gen: Callable[[int], TrigPoly]
    n_max: int
    label: str = "net"
    meta: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)
    _norms: dict = field(default_factory=dict, repr=False)

    def at(self, n: int) -> TrigPoly:
        if not 0 <= n <= self.n_max:
            raise IndexError(f"index {n} outside 0..{self.n_max}")
        if n not in self._cache:
            try:
                self._cache[n] = self.gen(n)
            except Exception as exc:  # noqa: BLE001 - reported with context
                raise GeneratorFail(f"generator of {self.label!r} failed at n={n}") from exc
        return self._cache[n]

    def map(self, fn: Callable[[TrigPoly], TrigPoly], label: str | None = None) -> "Net":
        return Net(
            gen=lambda n: fn(self.at(n)),
            n_max=self.n_max,
            label=label or f"map({self.label})",
        )

    def __add__(self, other: "Net") -> "Net":
        return net_add(self, other)

    def __sub__(self, other: "Net") -> "Net":
        return net_add(self, net_scale(other, -1.0))

    def __mul__(self, other: "Net") -> "Net":
        return net_mul(self, other)


def make_net(gen: Callable[[int], TrigPoly], n_max: int, label: str = "net") -> Net:
    """Wrap a deterministic generator, probing a few indices up front."""
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    net = Net(gen=gen, n_max=n_max, label=label)
    for n in (0, 1, n_max):
        net.at(n)
    return net


def constant_net(f: TrigPoly, n_max: int, label: str = "const") -> Net:
    return make_net(lambda n: f, n_max, label=label)


def net_add(f: Net, g: Net, label: str | None = None) -> Net:
    n_max = min(f.n_max, g.n_max)
    return Net(
        gen=lambda n: f.at(n) + g.at(n),
        n_max=n_max,
        label=label or f"({f.label}+{g.label})",
    )


def net_mul(f: Net, g: Net, label: str | None = None) -> Net:
    n_max = min(f.n_max, g.n_max)
    return Net(
        gen=lambda n: multiply(f.at(n), g.at(n)),
        n_max=n_max,
        label=label or f"({f.label}*{g.label})",
    )


def net_scale(f: Net, a: complex, label: str | None = None) -> Net:
    return Net(gen=lambda n: f.at(n).scaled(a), n_max=f.n_max, label=label or f.label)


# ---------------------------------------------------------------------------
# norm tables (memoized per net)
# ---------------------------------------------------------------------------

def _ws_key(ws: WeightSequence):
    return (ws.label, ws.p_max)


def _ud_table(net: Net, ws: WeightSequence, h: float) -> np.ndarray:
    key = ("ud", _ws_key(ws), float(h))
    if key not in net._norms:
        net._norms[key] = np.array(
            [log_ud_norm(net.at(n), ws, h) for n in range(net.n_max + 1)]
        )
    return net._norms[key]


def _sup_table(net: Net) -> np.ndarray:
    key = ("sup",)
    if key not in net._norms:
        vals = []
        for n in range(net.n_max + 1):
            v = sup_norm_argmax(net.at(n))[0]
            vals.append(math.log(v) if v > 0 else -np.inf)
        net._norms[key] = np.array(vals)
    return net._norms[key]


def _coef_table(net: Net, ws: WeightSequence, h: float) -> np.ndarray:
    key = ("coef", _ws_key(ws), float(h))
    if key not in net._norms:
        net._norms[key] = np.array(
            [
                log_coef_seminorm(net.at(n), ws, h, sign="plus")
                for n in range(net.n_max + 1)
            ]
        )
    return net._norms[key]


def _rj_table(net: Net, ws: WeightSequence, rs: RSequence) -> np.ndarray:
    key = ("rj", _ws_key(ws), id(rs))
    if key not in net._norms:
        net._norms[key] = np.array(
            [log_ud_norm_rj(net.at(n), ws, rs) for n in range(net.n_max + 1)]
        )
    return net._norms[key]


def _gauge_table(ws: WeightSequence, lam: float, n_max: int) -> np.ndarray:
    return np.asarray(associated_gauge(ws, lam * np.arange(n_max + 1, dtype=float)))


# ---------------------------------------------------------------------------
# quantifier engine
# ---------------------------------------------------------------------------

_RED = {"forall": (np.max, np.argmax), "exists": (np.min, np.argmin)}


def _pattern_verdict(
    quantity: Callable[[int, int], np.ndarray],
    outer_vals,
    inner_vals,
    outer_q: str,
    inner_q: str,
    tau: float,
    grid: dict,
    method: str,
) -> GrowthVerdict:
    margins = np.empty((len(outer_vals), len(inner_vals)))
    witnesses = {}
    for i in range(len(outer_vals)):
        for j in range(len(inner_vals)):
            _, m, w, _ = bounded_test(quantity(i, j), tau)
            margins[i, j] = m
            witnesses[(i, j)] = w
    inner_red, inner_arg = _RED[inner_q]
    outer_red, outer_arg = _RED[outer_q]
    per_outer = inner_red(margins, axis=1)
    margin = float(outer_red(per_outer))
    i_star = int(outer_arg(per_outer))
    j_star = int(inner_arg(margins[i_star]))
    return GrowthVerdict(
        bounded=margin <= tau,
        margin=margin,
        witness_n=witnesses[(i_star, j_star)],
        grid=grid,
        method=method,
        tau=tau,
        details={
            "margins": margins.tolist(),
            "decisive_outer": i_star,
            "decisive_inner": j_star,
        },
    )


def _grids(h_grid, lam_grid):
    h = tuple(h_grid) if h_grid is not None else DEFAULTS.h_grid
    lam = tuple(lam_grid) if lam_grid is not None else DEFAULTS.lambda_grid
    if len(h) == 0 or len(lam) == 0 or min(h) <= 0 or min(lam) <= 0:
        raise ValueError("grids must be nonempty with positive entries")
    return h, lam


# ---------------------------------------------------------------------------
# classifiers
# ---------------------------------------------------------------------------

def classify_moderate(
    net: Net,
    ws: WeightSequence,
    cls: str = "roumieu",
    h_grid=None,
    lam_grid=None,
    tau: float = DEFAULTS.tau,
) -> GrowthVerdict:
    """Desk verdict on membership in the moderate space of the given class."""
    h_grid, lam_grid = _grids(h_grid, lam_grid)
    U = {h: _ud_table(net, ws, h) for h in h_grid}
    G = {lam: _gauge_table(ws, lam, net.n_max) for lam in lam_grid}
    grid = {"h_grid": list(h_grid), "lambda_grid": list(lam_grid), "class": cls, "mode": "moderate"}
    if cls == "beurling":
        return _pattern_verdict(
            lambda i, j: U[h_grid[i]] - G[lam_grid[j]],
            h_grid, lam_grid, "forall", "exists", tau, grid, "full_norm",
        )
    if cls == "roumieu":
        return _pattern_verdict(
            lambda i, j: U[h_grid[j]] - G[lam_grid[i]],
            lam_grid, h_grid, "forall", "exists", tau, grid, "full_norm",
        )
    raise ValueError("cls must be 'beurling' or 'roumieu'")


def classify_negligible(
    net: Net,
    ws: WeightSequence,
    cls: str = "roumieu",
    h_grid=None,
    lam_grid=None,
    tau: float = DEFAULTS.tau,
) -> GrowthVerdict:
    """Desk verdict on membership in the negligible ideal of the given class."""
    h_grid, lam_grid = _grids(h_grid, lam_grid)
    U = {h: _ud_table(net, ws, h) for h in h_grid}
    G = {lam: _gauge_table(ws, lam, net.n_max) for lam in lam_grid}
    grid = {"h_grid": list(h_grid), "lambda_grid": list(lam_grid), "class": cls, "mode": "negligible"}
    quantity = lambda i, j: U[h_grid[i]] + G[lam_grid[j]]  # noqa: E731
    if cls == "beurling":
        return _pattern_verdict(
            quantity, h_grid, lam_grid, "forall", "forall", tau, grid, "full_norm"
        )
    if cls == "roumieu":
        return _pattern_verdict(
            quantity, h_grid, lam_grid, "exists", "exists", tau, grid, "full_norm"
        )
    raise ValueError("cls must be 'beurling' or 'roumieu'")


def classify_negligible_supnorm(
    net: Net,
    ws: WeightSequence,
    cls: str = "roumieu",
    lam_grid=None,
    tau: float = DEFAULTS.tau,
    moderate: GrowthVerdict | None = None,
) -> GrowthVerdict:
    """Negligibility decided from plain sup norms alone.

    Valid only on nets already known moderate (the sup-norm
    characterization of the null ideal); pass the moderate verdict in or
    let it be recomputed here.  Quantifiers are over lambda only:
    Beurling forall, Roumieu exists.
    """
    if moderate is None:
        moderate = classify_moderate(net, ws, cls, tau=tau)
    if not moderate.bounded:
        raise HypothesisFail(
            f"net {net.label!r} is not desk-moderate; sup-norm characterization needs it"
        )
    _, lam_grid = _grids(None, lam_grid)
    S = _sup_table(net)
    G = {lam: _gauge_table(ws, lam, net.n_max) for lam in lam_grid}
    grid = {"lambda_grid": list(lam_grid), "class": cls, "mode": "negligible"}
    q = "forall" if cls == "beurling" else "exists"
    return _pattern_verdict(
        lambda i, j: S + G[lam_grid[j]],
        (None,), lam_grid, "forall", q, tau, grid, "sup_norm",
    )


def coef_classify(
    coef_net,
    ws: WeightSequence,
    cls: str = "roumieu",
    mode: str = "moderate",
    h_grid=None,
    lam_grid=None,
    tau: float = DEFAULTS.tau,
) -> GrowthVerdict:
    """Classification on the coefficient side, via weighted seminorms.

    Accepts a Net (its coefficient tables are used) or a callable
    n -> TrigPoly.  Equivalent to the function-side classifiers by the
    coefficient characterization; the test batteries confirm agreement.
    """
    net = coef_net if isinstance(coef_net, Net) else make_net(coef_net, DEFAULTS.n_max)
    h_grid, lam_grid = _grids(h_grid, lam_grid)
    U = {h: _coef_table(net, ws, h) for h in h_grid}
    G = {lam: _gauge_table(ws, lam, net.n_max) for lam in lam_grid}
    grid = {"h_grid": list(h_grid), "lambda_grid": list(lam_grid), "class": cls, "mode": mode}
    if mode == "moderate":
        if cls == "beurling":
            return _pattern_verdict(
                lambda i, j: U[h_grid[i]] - G[lam_grid[j]],
                h_grid, lam_grid, "forall", "exists", tau, grid, "coefficient",
            )
        return _pattern_verdict(
            lambda i, j: U[h_grid[j]] - G[lam_grid[i]],
            lam_grid, h_grid, "forall", "exists", tau, grid, "coefficient",
        )
    if mode == "negligible":
        quantity = lambda i, j: U[h_grid[i]] + G[lam_grid[j]]  # noqa: E731
        pattern = ("forall", "forall") if cls == "beurling" else ("exists", "exists")
        return _pattern_verdict(
            quantity, h_grid, lam_grid, *pattern, tau, grid, "coefficient"
        )
    raise ValueError("mode must be 'moderate' or 'negligible'")


def roumieu_rj_classify(
    net: Net,
    ws: WeightSequence,
    r_families,
    mode: str = "moderate",
    tau: float = DEFAULTS.tau,
) -> GrowthVerdict:
    """Projective-style Roumieu classification over a finite family of pairs.

    r_families is a list of (r, s) RSequence pairs standing in for the
    full directed family: moderate asks that every supplied r admits
    some supplied s with ||f_n||_{r} e^{-M_s(n)} bounded; negligible
    asks boundedness of ||f_n||_{r} e^{+M_s(n)} for every pair.
    """
    pairs = list(r_families)
    if not pairs:
        raise ValueError("r_families must be nonempty")
    r_list = [p[0] for p in pairs]
    s_list = [p[1] for p in pairs]
    R = {id(r): _rj_table(net, ws, r) for r in r_list}
    G = {
        id(s): np.asarray(
            associated_gauge(modified_weights(ws, s), np.arange(net.n_max + 1, dtype=float))
        )
        for s in s_list
    }
    grid = {
        "families": [(r.label, s.label) for r, s in pairs],
        "mode": mode,
    }
    if mode == "moderate":
        return _pattern_verdict(
            lambda i, j: R[id(r_list[i])] - G[id(s_list[j])],
            r_list, s_list, "forall", "exists", tau, grid, "rj_family",
        )
    if mode == "negligible":
        return _pattern_verdict(
            lambda i, j: R[id(r_list[i])] + G[id(s_list[j])],
            r_list, s_list, "forall", "forall", tau, grid, "rj_family",
        )
    raise ValueError("mode must be 'moderate' or 'negligible'")


# ---------------------------------------------------------------------------
# generalized numbers and point values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralizedNumber:
    """A net of complex values, the scalar counterpart of a Net.

    The quotient ring (moderate modulo negligible) these represent is
    not a field: nets vanishing on alternating index ranges are zero
    divisors.
    """

    values: np.ndarray
    label: str = "z"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def gn_classify(
    z: GeneralizedNumber,
    ws: WeightSequence,
    cls: str = "roumieu",
    mode: str = "moderate",
    lam_grid=None,
    tau: float = DEFAULTS.tau,
) -> GrowthVerdict:
    """Classify a generalized number; note the lambda quantifiers flip
    relative to the function case (there is no h here):

        moderate    Beurling: exists lambda    Roumieu: forall lambda
        negligible  Beurling: forall lambda    Roumieu: exists lambda
    """
    _, lam_grid = _grids(None, lam_grid)
    with np.errstate(divide="ignore"):
        logz = np.where(z.values != 0, np.log(np.abs(z.values)), -np.inf)
    n_max = z.n_max
    G = {lam: _gauge_table(ws, lam, n_max) for lam in lam_grid}
    grid = {"lambda_grid": list(lam_grid), "class": cls, "mode": mode}
    if mode == "moderate":
        q = "exists" if cls == "beurling" else "forall"
        sign = -1.0
    elif mode == "negligible":
        q = "forall" if cls == "beurling" else "exists"
        sign = +1.0
    else:
        raise ValueError("mode must be 'moderate' or 'negligible'")
    return _pattern_verdict(
        lambda i, j: logz + sign * G[lam_grid[j]],
        (None,), lam_grid, "forall", q, tau, grid, "scalar",
    )


def point_value(net: Net, t: GeneralizedNumber, label: str | None = None) -> GeneralizedNumber:
    """The generalized point value n -> f_n(t_n)."""
    tv = np.real(t.values)
    if np.any(tv < -1e-12) or np.any(tv > 2.0 * math.pi + 1e-12):
        raise ValueError("point entries must lie in [0, 2pi]")
    n_max = min(net.n_max, t.n_max)
    vals = np.array([evaluate(net.at(n), float(tv[n])) for n in range(n_max + 1)])
    return GeneralizedNumber(vals, label=label or f"{net.label}({t.label})")


def find_witness(
    net: Net,
    ws: WeightSequence,
    lam: float = 1.0,
    tau: float = DEFAULTS.tau,
):
    """Indices and evaluation points realizing a negligibility failure.

    Looks at log sup|f_n| + M(lambda n): if the profile is bounded the
    net is negligible at this rate and NoWitness is raised; otherwise
    returns the tail indices exceeding the head baseline together with
    the sup-norm argmax points, whose induced generalized point value is
    non-negligible.
    """
    S = _sup_table(net)
    prof = S + _gauge_table(ws, lam, net.n_max)
    bounded, _, _, baseline = bounded_test(prof, tau)
    if bounded:
        raise NoWitness(f"net {net.label!r} is negligible at lambda={lam}")
    n0 = max(8, net.n_max // 8)
    idx = [n for n in range(n0 + 1, net.n_max + 1) if prof[n] > baseline + tau]
    points = np.array([sup_norm_argmax(net.at(n))[1] for n in idx])
    return np.array(idx, dtype=int), points
