"""Trigonometric polynomials and coefficient-represented distributions.

Everything computable in this package is a finitely supported Fourier
coefficient table (TrigPoly) or a coefficient oracle with a declared
growth class (CoefDistribution).  Analysis is coefficient-first;
time-domain sampling only enters through sup_norm and the quadrature
round trip.

Derivatives follow the convention D = -i d/dt, so D^p acts on
coefficients as c_k -> k^p c_k.  Norm computations that would overflow
double precision (k^p against (p!)^s) are carried out in log scale.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.fft import fft, ifft, next_fast_len
from scipy.special import logsumexp

from .verdict import DEFAULTS
from .weights import RSequence, TruncationWarning, WeightSequence, associated_gauge, modified_weights

TWO_PI = 2.0 * math.pi
_LOG_HUGE = 706.0  # just under log(DBL_MAX)


class AliasWarning(RuntimeWarning):
    """Quadrature boundary coefficients look undersampled."""


class CoefficientOverflow(OverflowError):
    """k^p c_k left the representable range; use the log-scale norm path."""


# ---------------------------------------------------------------------------
# TrigPoly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrigPoly:
    """Finitely supported coefficient table c_k, k in [-N, N]."""

    coef: np.ndarray
    degree: int

    def __post_init__(self):
        c = np.ascontiguousarray(self.coef, dtype=complex)
        if c.shape != (2 * self.degree + 1,):
            raise ValueError("coef must have length 2*degree + 1")
        c.setflags(write=False)
        object.__setattr__(self, "coef", c)

    @classmethod
    def zero(cls, degree: int = 0) -> "TrigPoly":
        return cls(np.zeros(2 * degree + 1, dtype=complex), degree)

    @classmethod
    def const(cls, value: complex) -> "TrigPoly":
        return cls(np.array([value], dtype=complex), 0)

    @classmethod
    def basis(cls, k: int, value: complex = 1.0) -> "TrigPoly":
        """value * e^{ikt}."""
        n = abs(int(k))
        c = np.zeros(2 * n + 1, dtype=complex)
        c[k + n] = value
        return cls(c, n)

    @classmethod
    def from_coef(cls, table: dict[int, complex]) -> "TrigPoly":
        n = max((abs(int(k)) for k in table), default=0)
        c = np.zeros(2 * n + 1, dtype=complex)
        for k, v in table.items():
            c[int(k) + n] += v
        return cls(c, n)

    @classmethod
    def dirichlet(cls, n: int) -> "TrigPoly":
        """D_n = (1/2pi) sum_{|k|<=n} e^{ikt}."""
        return cls(np.full(2 * n + 1, 1.0 / TWO_PI, dtype=complex), n)

    @classmethod
    def sine(cls) -> "TrigPoly":
        return cls.from_coef({1: -0.5j, -1: 0.5j})

    @classmethod
    def cosine(cls) -> "TrigPoly":
        return cls.from_coef({1: 0.5, -1: 0.5})

    def support(self) -> np.ndarray:
        return np.arange(-self.degree, self.degree + 1)

    def coefficient(self, k):
        """c_k with zero outside the stored band; scalar or array k."""
        k = np.asarray(k)
        inside = np.abs(k) <= self.degree
        idx = np.where(inside, k + self.degree, 0)
        vals = np.where(inside, self.coef[idx], 0.0 + 0.0j)
        return complex(vals[()]) if vals.ndim == 0 else vals

    def trimmed(self) -> "TrigPoly":
        """Drop an all-zero outer band."""
        nz = np.nonzero(self.coef)[0]
        if len(nz) == 0:
            return TrigPoly.zero()
        n = int(max(abs(nz[0] - self.degree), abs(nz[-1] - self.degree)))
        c = self.coef[self.degree - n : self.degree + n + 1]
        return TrigPoly(c.copy(), n)

    def scaled(self, a: complex) -> "TrigPoly":
        return TrigPoly(self.coef * a, self.degree)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        n = max(self.degree, other.degree)
        c = np.zeros(2 * n + 1, dtype=complex)
        c[n - self.degree : n + self.degree + 1] += self.coef
        c[n - other.degree : n + other.degree + 1] += other.coef
        return TrigPoly(c, n)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + other.scaled(-1.0)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        return self.scaled(other)

    __rmul__ = __mul__

    def __call__(self, t):
        return evaluate(self, t)


def evaluate(f: TrigPoly, t):
    """sum_k c_k e^{ikt}, vectorized over t with chunked summation."""
    t_in = np.asarray(t, dtype=float)
    scalar = t_in.ndim == 0
    tb = np.atleast_1d(t_in)
    ks = f.support()
    out = np.empty(len(tb), dtype=complex)
    chunk = max(1, 2_000_000 // max(len(ks), 1))
    for i in range(0, len(tb), chunk):
        block = tb[i : i + chunk]
        out[i : i + chunk] = np.exp(1j * np.outer(block, ks)) @ f.coef
    return complex(out[0]) if scalar else out


def derivative(f: TrigPoly, p: int = 1) -> TrigPoly:
    """D^p f with D = -i d/dt, i.e. the coefficient multiplier k^p."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p == 0:
        return f
    ks = f.support().astype(float)
    with np.errstate(divide="ignore"):
        logk = np.where(ks != 0, np.log(np.abs(ks)), -np.inf)
        logc = np.where(f.coef != 0, np.log(np.abs(f.coef)), -np.inf)
    peak = np.max(p * logk + logc) if len(ks) else -np.inf
    if peak > _LOG_HUGE:
        raise CoefficientOverflow(
            f"|k|^{p} |c_k| exceeds double range; use the log-scale norm path"
        )
    return TrigPoly(f.coef * ks**p, f.degree)


# ---------------------------------------------------------------------------
# sup norm: oversampled grid plus golden-section refinement
# ---------------------------------------------------------------------------

def _grid_size(degree: int) -> int:
    return next_fast_len(max(4096, 16 * degree + 1))


def _values_on_grid(coef: np.ndarray, degree: int, m: int) -> np.ndarray:
    """f(2 pi j / m) for j = 0..m-1 via a zero-padded inverse DFT."""
    buf = np.zeros(m, dtype=complex)
    ks = np.arange(-degree, degree + 1)
    np.add.at(buf, ks % m, coef)
    return ifft(buf) * m


def _golden_max_rows(w: np.ndarray, ks: np.ndarray, lo: np.ndarray, hi: np.ndarray, iters: int = 40):
    """Golden-section maximization of |sum_k w[i,k] e^{ikt}| per row.

    All rows iterate in lockstep; each step evaluates both interior
    points with one outer-product exponential.  Returns (values, ts).
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a = lo.astype(float).copy()
    b = hi.astype(float).copy()

    def val(ts):
        return np.abs(np.einsum("ik,ik->i", w, np.exp(1j * np.outer(ts, ks))))

    best_v = val((a + b) / 2.0)
    best_t = (a + b) / 2.0
    for _ in range(iters):
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        gc, gd = val(c), val(d)
        for g, t in ((gc, c), (gd, d)):
            upd = g > best_v
            best_v = np.where(upd, g, best_v)
            best_t = np.where(upd, t, best_t)
        left = gc > gd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    return best_v, best_t


def _golden_max(g, a: float, b: float, iters: int = 60):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if b - a < 1e-13:
            break
        if gc > gd:
            b, d, gd = d, c, gc
            c = b - invphi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + invphi * (b - a)
            gd = g(d)
    return (c, gc) if gc >= gd else (d, gd)


def _local_peaks(vals: np.ndarray, rel: float = 0.975, cap: int = 4) -> np.ndarray:
    """Indices of circular local maxima within rel of the global max."""
    up = vals >= np.roll(vals, 1)
    down = vals >= np.roll(vals, -1)
    js = np.nonzero(up & down & (vals >= rel * np.max(vals)))[0]
    if len(js) > cap:
        js = js[np.argsort(vals[js])[-cap:]]
    return js


def sup_norm_argmax(f: TrigPoly):
    """(max_t |f(t)|, argmax t) on an oversampled grid, locally refined.

    Every near-winning local maximum of the grid profile is refined by
    golden section, so ties between peaks cannot hide the true sup.
    """
    if f.degree == 0:
        return abs(f.coef[0]), 0.0
    m = _grid_size(f.degree)
    vals = np.abs(_values_on_grid(f.coef, f.degree, m))
    js = _local_peaks(vals)
    if len(js) == 0:
        js = np.array([int(np.argmax(vals))])
    step = TWO_PI / m
    ts = TWO_PI * js / m
    w = np.tile(f.coef, (len(js), 1))
    ref_v, ref_t = _golden_max_rows(w, f.support().astype(float), ts - step, ts + step)
    i = int(np.argmax(ref_v))
    if ref_v[i] >= np.max(vals):
        return float(ref_v[i]), float(ref_t[i] % TWO_PI)
    j = int(np.argmax(vals))
    return float(vals[j]), float(TWO_PI * j / m)


def sup_norm(f: TrigPoly) -> float:
    """max_t |f(t)|, accurate to 1e-6 relative for degree <= 512."""
    return sup_norm_argmax(f)[0]


# ---------------------------------------------------------------------------
# ultradifferentiable norms, in log scale
# ---------------------------------------------------------------------------

def _log_abs_coef(f: TrigPoly):
    with np.errstate(divide="ignore"):
        lc = np.where(f.coef != 0, np.log(np.abs(f.coef)), -np.inf)
    # np.angle stays finite on denormals where c/|c| would not
    phases = np.where(f.coef != 0, np.exp(1j * np.angle(f.coef)), 0)
    return lc, phases


def _log_sup_rows(f: TrigPoly, ps: np.ndarray, offsets=None, refine_rel: float = 1.05):
    """log sup_t |D^p f| for each p in ps, computed on scaled rows.

    Rows are normalized by their largest coefficient magnitude so the
    batched grid evaluation stays in range.  The grid is 16x oversampled
    for the row degree; rows whose offset-adjusted value (offsets carry
    the caller's h^p / M_p weighting) sits within refine_rel of the
    winner get their near-top local maxima refined by golden section,
    which keeps the winning value accurate far beyond the grid
    resolution.
    """
    ks = f.support().astype(float)
    lc, phases = _log_abs_coef(f)
    with np.errstate(divide="ignore"):
        logk = np.where(ks != 0, np.log(np.abs(ks)), -np.inf)
    pcol = ps[:, None].astype(float)
    with np.errstate(invalid="ignore"):
        term = pcol * logk[None, :]
    term[ps == 0, :] = 0.0
    logmat = lc[None, :] + term
    scale = np.max(logmat, axis=1)
    dead = ~np.isfinite(scale)
    scale_safe = np.where(dead, 0.0, scale)
    signs = np.where(ks[None, :] < 0, (-1.0) ** pcol, 1.0)
    w = np.exp(logmat - scale_safe[:, None]) * phases[None, :] * signs

    m = next_fast_len(max(64, 16 * f.degree + 1))
    buf = np.zeros((len(ps), m), dtype=complex)
    cols = (f.support() % m).astype(int)
    buf[:, cols] = w  # distinct columns since m > 2*degree
    vals = np.abs(ifft(buf, axis=1) * m)
    rowmax = np.max(vals, axis=1)

    out = np.where(dead, -np.inf, scale_safe + np.log(np.where(rowmax > 0, rowmax, 1.0)))
    if not np.any(np.isfinite(out)):
        return out
    offsets = np.zeros(len(ps)) if offsets is None else np.asarray(offsets, dtype=float)
    adjusted = out + offsets
    best = np.max(adjusted)
    cand = np.nonzero(adjusted >= best - math.log(refine_rel))[0]
    if len(cand):
        rows, brackets = [], []
        for i in cand:
            for j in _local_peaks(vals[i]):
                rows.append(i)
                brackets.append(TWO_PI * j / m)
        rows = np.array(rows, dtype=int)
        ts = np.array(brackets)
        step = TWO_PI / m
        ref_v, _ = _golden_max_rows(w[rows], ks, ts - step, ts + step)
        for i, v in zip(rows, ref_v):
            if v > 0:
                out[i] = max(out[i], scale_safe[i] + math.log(v))
    return out


def log_ud_norm(f: TrigPoly, ws: WeightSequence, h: float = 1.0) -> float:
    """log sup_p h^p ||D^p f||_inf / M_p.

    Termination uses the coefficient bound h^p ||D^p f|| <= (h k_eff)^p
    sum|c_k|: once p passes the peak of (h k_eff)^p / M_p the bound
    decreases, and the loop stops as soon as it falls below the running
    maximum.  Finite for every TrigPoly.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    g = f.trimmed()
    lc, _ = _log_abs_coef(g)
    if not np.any(np.isfinite(lc)):
        return -np.inf
    if g.degree == 0:
        return float(lc[0])
    k_eff = g.degree
    log_sum_c = float(logsumexp(lc[np.isfinite(lc)]))
    log_hk = math.log(h) + math.log(k_eff)

    table_cap = None if ws.gevrey_s is not None else ws.p_max
    p_peak = int(ws._p_star(h * k_eff, table_cap)[0])
    hard_cap = table_cap if table_cap is not None else p_peak + 4096

    best = -np.inf
    p0 = 0
    while True:
        # reach just past the bound's peak, then step in short blocks
        block = min(64, max(8, p_peak + 17 - p0))
        p1 = min(p0 + block, hard_cap + 1)
        ps = np.arange(p0, p1)
        if len(ps) == 0:
            warnings.warn(
                "ud norm termination not met by p_max; raise p_max",
                TruncationWarning,
                stacklevel=2,
            )
            break
        logM = np.asarray(ws.logM_at(ps), dtype=float)
        offsets = ps * math.log(h) - logM
        log_sup = _log_sup_rows(g, ps, offsets=offsets)
        terms = log_sup + offsets
        best = max(best, float(np.max(terms)))
        bounds = ps * log_hk + log_sum_c - logM
        done = (ps > p_peak) & (bounds < best)
        if np.any(done):
            break
        if p1 > hard_cap:
            warnings.warn(
                "ud norm termination not met by p_max; raise p_max",
                TruncationWarning,
                stacklevel=2,
            )
            break
        p0 = p1
    return best


def ud_norm(f: TrigPoly, ws: WeightSequence, h: float = 1.0) -> float:
    """sup_p h^p ||D^p f||_inf / M_p (may overflow to inf; see log_ud_norm)."""
    v = log_ud_norm(f, ws, h)
    return math.exp(v) if v < _LOG_HUGE else math.inf


def log_ud_norm_rj(f: TrigPoly, ws: WeightSequence, rs: RSequence) -> float:
    """log sup_p ||D^p f||_inf / (M_p prod_{j<=p} r_j)."""
    return log_ud_norm(f, modified_weights(ws, rs), 1.0)


def ud_norm_rj(f: TrigPoly, ws: WeightSequence, rs: RSequence) -> float:
    v = log_ud_norm_rj(f, ws, rs)
    return math.exp(v) if v < _LOG_HUGE else math.inf


# ---------------------------------------------------------------------------
# quadrature, convolution, multiplication
# ---------------------------------------------------------------------------

def fourier_coefficients(fn: Callable, n: int) -> TrigPoly:
    """Coefficients (1/2pi) int_0^{2pi} f(t) e^{-ikt} dt by the rectangle rule.

    Uses 2n + 2 uniform points, which is exact to roundoff for
    trigonometric polynomials of degree <= n by discrete orthogonality.
    """
    m = 2 * n + 2
    t = TWO_PI * np.arange(m) / m
    try:
        samples = np.asarray(fn(t), dtype=complex)
        if samples.shape != t.shape:
            raise TypeError
    except TypeError:
        samples = np.array([fn(x) for x in t], dtype=complex)
    spec = fft(samples) / m
    ks = np.arange(-n, n + 1)
    coef = spec[ks % m]
    peak = float(np.max(np.abs(coef))) if len(coef) else 0.0
    if peak > 0 and max(abs(coef[0]), abs(coef[-1])) > 0.5 * peak:
        warnings.warn(
            "boundary coefficients are large; input may exceed degree n",
            AliasWarning,
            stacklevel=2,
        )
    return TrigPoly(coef, n)


def multiply(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Pointwise product via the Cauchy product of coefficient tables."""
    return TrigPoly(np.convolve(f.coef, g.coef), f.degree + g.degree)


# ---------------------------------------------------------------------------
# coefficient distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefDistribution:
    """A coefficient oracle k -> c(k) with a declared growth class.

    growth_lambda is a lambda for which the weighted sup
    sup_k |c(k)| e^{-M(lambda k)} is finite; cls records whether the
    object is treated as Beurling or Roumieu class downstream.
    """

    oracle: Callable[[np.ndarray], np.ndarray]
    tag: str
    cls: str = "roumieu"
    growth_lambda: float = 1.0
    label: str = ""
    params: dict[str, Any] = field(default_factory=dict)

    def coefficients(self, ks) -> np.ndarray:
        ks = np.atleast_1d(np.asarray(ks))
        return np.asarray(self.oracle(ks), dtype=complex)

    def scaled(self, a: complex) -> "CoefDistribution":
        return CoefDistribution(
            oracle=lambda ks, _o=self.oracle: np.asarray(_o(ks)) * a,
            tag=self.tag,
            cls=self.cls,
            growth_lambda=self.growth_lambda,
            label=f"{a}*{self.label}",
            params=dict(self.params),
        )


def delta(cls: str = "roumieu") -> CoefDistribution:
    """The Dirac comb normalisation: constant coefficients 1/2pi."""
    return CoefDistribution(
        oracle=lambda ks: np.full(len(ks), 1.0 / TWO_PI, dtype=complex),
        tag="delta",
        cls=cls,
        growth_lambda=1.0,
        label="delta",
    )


def cot_reg(cls: str = "roumieu") -> CoefDistribution:
    """Regularized cotangent: c(0) = i and c(-2k) = 2i for k >= 1."""

    def oracle(ks):
        ks = np.asarray(ks)
        vals = np.where((ks < 0) & (ks % 2 == 0), 2.0j, 0.0 + 0.0j)
        return np.where(ks == 0, 1.0j, vals)

    return CoefDistribution(
        oracle=oracle, tag="cot_reg", cls=cls, growth_lambda=1.0, label="cot_reg"
    )


def exp_decay(mu: float, cls: str = "roumieu") -> CoefDistribution:
    """Geometric coefficient decay c(k) = e^{-mu |k|} (a smooth-class function)."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    return CoefDistribution(
        oracle=lambda ks: np.exp(-mu * np.abs(np.asarray(ks, dtype=float))).astype(complex),
        tag="exp_decay",
        cls=cls,
        growth_lambda=1.0,
        label=f"exp_decay:{mu:g}",
        params={"mu": mu},
    )


def exp_growth(lam: float, ws: WeightSequence, cls: str = "beurling") -> CoefDistribution:
    """Gauge-rate coefficient growth c(k) = e^{M(lambda k)} (a proper ultradistribution).

    Values saturate at 1e300 so that wide sweeps stay inside double
    range; the saturated region only ever makes growth verdicts fail
    harder.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")

    def oracle(ks):
        gauge = np.asarray(associated_gauge(ws, lam * np.asarray(ks, dtype=float)))
        return np.exp(np.minimum(gauge, 690.7)).astype(complex)

    return CoefDistribution(
        oracle=oracle,
        tag="exp_growth",
        cls=cls,
        growth_lambda=lam,
        label=f"exp_growth:{lam:g}",
        params={"lambda": lam, "weights": ws.label},
    )


def from_trigpoly(f: TrigPoly, cls: str = "roumieu", label: str = "table") -> CoefDistribution:
    return CoefDistribution(
        oracle=lambda ks, _f=f: _f.coefficient(np.asarray(ks)),
        tag="table",
        cls=cls,
        growth_lambda=1.0,
        label=label,
        params={"degree": f.degree},
    )


def truncate_distribution(
    dist: CoefDistribution, k_max: int = DEFAULTS.k_max, floor_rel: float = 1e-16
):
    """Degree-limited TrigPoly view of an oracle with a recorded tail estimate.

    Coefficients below floor_rel of the peak are dropped (they cannot
    affect double-precision norms); the tail estimate extrapolates the
    boundary decay geometrically when it is decaying, else reports the
    boundary magnitude.
    """
    ks = np.arange(-k_max, k_max + 1)
    vals = dist.coefficients(ks)
    mags = np.abs(vals)
    peak = float(np.max(mags)) if len(mags) else 0.0
    if peak == 0.0:
        return TrigPoly.zero(), 0.0
    keep = mags >= floor_rel * peak
    if not np.any(keep):
        return TrigPoly.zero(), 0.0
    idx = np.nonzero(keep)[0]
    n = int(max(abs(ks[idx[0]]), abs(ks[idx[-1]])))
    poly = TrigPoly(vals[k_max - n : k_max + n + 1].copy(), n)
    edge = float(max(mags[k_max - n], mags[k_max + n]))
    inner = float(max(mags[k_max - n + 1], mags[k_max + n - 1])) if n >= 1 else edge
    if inner > 0 and edge < inner:
        rho = edge / inner
        tail = 2.0 * edge * rho / (1.0 - rho)
    else:
        tail = float(np.max(np.abs(dist.coefficients(np.array([-(n + 1), n + 1])))))
    return poly, tail


def convolve(f, g):
    """Convolution on the coefficient side: c(k) = 2pi fhat(k) ghat(k).

    Returns a TrigPoly when either factor is one (finite support wins),
    otherwise a CoefDistribution whose declared growth rate combines the
    factors' rates conservatively.
    """
    if isinstance(f, TrigPoly) and isinstance(g, TrigPoly):
        n = min(f.degree, g.degree)
        ks = np.arange(-n, n + 1)
        return TrigPoly(TWO_PI * f.coefficient(ks) * g.coefficient(ks), n)
    if isinstance(f, TrigPoly):
        f, g = g, f
    if isinstance(g, TrigPoly):
        ks = np.arange(-g.degree, g.degree + 1)
        return TrigPoly(TWO_PI * f.coefficients(ks) * g.coefficient(ks), g.degree)
    lam = 4.0 * max(f.growth_lambda, g.growth_lambda)  # covers H <= 4 (Gevrey s <= 2)
    return CoefDistribution(
        oracle=lambda ks: TWO_PI * f.coefficients(ks) * g.coefficients(ks),
        tag="table" if "table" in (f.tag, g.tag) else f.tag,
        cls=f.cls,
        growth_lambda=lam,
        label=f"({f.label})*({g.label})",
    )


# ---------------------------------------------------------------------------
# weighted coefficient seminorms
# ---------------------------------------------------------------------------

def _coef_arrays(c, k_max: int):
    if isinstance(c, TrigPoly):
        return c.support(), c.coef, False
    if isinstance(c, CoefDistribution):
        ks = np.arange(-k_max, k_max + 1)
        return ks, c.coefficients(ks), True
    if isinstance(c, dict):
        ks = np.array(sorted(c), dtype=int)
        return ks, np.array([c[k] for k in ks], dtype=complex), False
    ks, vals = c
    return np.asarray(ks), np.asarray(vals, dtype=complex), False


def log_coef_seminorm(
    c,
    ws: WeightSequence,
    lam: float,
    sign: str = "plus",
    k_max: int = DEFAULTS.k_max,
) -> float:
    """log sup_k |c_k| e^{+/- M(lambda k)} over the stored or swept support.

    sign='plus' is the smooth-class seminorm, sign='minus' the dual one.
    Oracle-backed inputs are swept over |k| <= k_max, with a
    TruncationWarning when the profile is still rising at the boundary.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    ks, vals, swept = _coef_arrays(c, k_max)
    if len(ks) == 0:
        return -np.inf
    with np.errstate(divide="ignore"):
        lc = np.where(vals != 0, np.log(np.abs(vals)), -np.inf)
    gauge = np.asarray(associated_gauge(ws, lam * ks.astype(float)), dtype=float)
    prof = lc + gauge if sign == "plus" else lc - gauge
    if swept and len(ks) > 16:
        half = len(ks) // 4
        head = np.max(prof[half:-half]) if len(prof[half:-half]) else -np.inf
        tail = max(np.max(prof[:half]), np.max(prof[-half:]))
        if tail > head + 1e-9:
            warnings.warn(
                "weighted coefficient profile still rising at k_max",
                TruncationWarning,
                stacklevel=2,
            )
    return float(np.max(prof))


def coef_seminorm(c, ws, lam, sign="plus", k_max=DEFAULTS.k_max) -> float:
    v = log_coef_seminorm(c, ws, lam, sign, k_max)
    if v == -np.inf:
        return 0.0
    return math.exp(v) if v < _LOG_HUGE else math.inf


def certify_growth(
    dist: CoefDistribution,
    ws: WeightSequence,
    k_max: int = DEFAULTS.k_max,
    tau: float = DEFAULTS.tau,
):
    """Check the declared class: the dual-seminorm profile at growth_lambda stays bounded."""
    from .verdict import profile_verdict

    ks = np.arange(-k_max, k_max + 1)
    vals = dist.coefficients(ks)
    with np.errstate(divide="ignore"):
        lc = np.where(vals != 0, np.log(np.abs(vals)), -np.inf)
    gauge = np.asarray(associated_gauge(ws, dist.growth_lambda * ks.astype(float)))
    return profile_verdict(
        ks, lc - gauge, tau,
        {"lambda": dist.growth_lambda, "mode": "sigma_prime", "k_max": k_max},
        "coefficient",
    )
