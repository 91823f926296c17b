"""Middle-epsilon Cantor sets and the calculus carried by their staircase.

A middle-epsilon Cantor set is what remains of [c1, c2] after deleting the
open middle fraction ``epsilon`` of every interval, recursively.  A depth-k
approximation keeps the 2**k closed intervals of generation k, each of
length (c2 - c1) * ((1 - epsilon) / 2)**k.  On that cover this module
computes:

* the coarse-grained alpha-measure: Gamma(alpha + 1) * (cell length)**alpha
  summed over the cells of a partition that meet the set.  With the
  partition aligned to the cover, gaps contribute nothing and the sum has
  the closed form Gamma(alpha + 1) * 2**k * length_k**alpha.  Refining
  inside a gap adds zero and refining inside a covered cell only lowers the
  sum, so the aligned partition attains the infimum over partitions of the
  same mesh.
* the dimension: the alpha at which the measure switches from growing with
  depth to decaying, located by bisection on the depth-growth ratio.
* the integral staircase S(x): the measure accumulated from a reference
  point c0, a monotone function that is exactly flat across gaps.
* derivatives and integrals of functions taken against S instead of x.

At alpha = 1 on the full interval (depth 0) everything degenerates to the
ordinary calculus: Gamma(2) = 1 and S(x) = x - c0.

All quantities are double precision.  Instances are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CantorSpec",
    "FractalApprox",
    "FractalIntegral",
    "IllConditionedError",
    "NonConvergenceError",
    "Staircase",
    "build_cantor",
    "coarse_measure",
    "estimate_dimension",
    "fractal_derivative",
    "fractal_integral",
    "indicator",
    "staircase_eval",
    "staircase_inverse",
]


class NonConvergenceError(RuntimeError):
    """Raised when the dimension bisection cannot settle on an estimate."""


class IllConditionedError(RuntimeError):
    """Raised when every available staircase increment underflows."""


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (math.isfinite(alpha) and 0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0,1]")
    return alpha


@dataclass(frozen=True)
class CantorSpec:
    """Parameters of a middle-epsilon Cantor set on [c1, c2].

    ``c0`` is the reference point from which the staircase accumulates
    measure; it defaults to ``c1``.
    """

    c1: float = 0.0
    c2: float = 1.0
    epsilon: float = 1.0 / 3.0
    c0: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise ValueError("c1 and c2 must be finite")
        if not self.c1 < self.c2:
            raise ValueError("c1 must be strictly less than c2")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.c0 is not None and not self.c1 <= self.c0 <= self.c2:
            raise ValueError("c0 must lie in [c1, c2]")

    @property
    def anchor(self) -> float:
        """Reference point of the staircase (c0, defaulting to c1)."""
        return self.c1 if self.c0 is None else self.c0

    @property
    def keep_fraction(self) -> float:
        """Length fraction each child keeps per refinement, (1 - epsilon) / 2."""
        return (1.0 - self.epsilon) / 2.0

    def interval_length(self, depth: int) -> float:
        """Length of one covered interval at the given depth."""
        return (self.c2 - self.c1) * self.keep_fraction**depth


@dataclass(frozen=True)
class FractalApprox:
    """Depth-k cover of the set: 2**k sorted, disjoint closed intervals."""

    spec: CantorSpec
    depth: int
    left: np.ndarray
    right: np.ndarray

    @property
    def n_intervals(self) -> int:
        return int(self.left.size)

    @property
    def interval_length(self) -> float:
        return self.spec.interval_length(self.depth)

    def gaps(self) -> tuple[np.ndarray, np.ndarray]:
        """Open gaps between consecutive covered intervals, as (starts, ends)."""
        return self.right[:-1], self.left[1:]


def build_cantor(spec: CantorSpec, depth: int) -> FractalApprox:
    """Apply the middle-removal rule ``depth`` times to [c1, c2]."""
    depth = int(depth)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    left = np.array([spec.c1])
    right = np.array([spec.c2])
    keep = spec.keep_fraction
    for _ in range(depth):
        length = right - left
        child_left = np.empty(2 * left.size)
        child_right = np.empty(2 * left.size)
        child_left[0::2] = left
        child_right[0::2] = left + keep * length
        child_left[1::2] = right - keep * length
        child_right[1::2] = right
        left, right = child_left, child_right
    left.setflags(write=False)
    right.setflags(write=False)
    return FractalApprox(spec=spec, depth=depth, left=left, right=right)


def indicator(approx: FractalApprox, a: float, b: float) -> int:
    """1 if [a, b] meets at least one covered interval, else 0."""
    a = float(a)
    b = float(b)
    if a > b:
        raise ValueError("interval must satisfy a <= b")
    i = int(np.searchsorted(approx.left, b, side="right")) - 1
    if i < 0:
        return 0
    return 1 if approx.right[i] >= a else 0


def coarse_measure(approx: FractalApprox, alpha: float, mesh: float) -> float:
    """Coarse-grained alpha-measure of the set at the given mesh.

    The partition is aligned to the finest cover generation whose cell
    length does not exceed ``mesh`` (see the module docstring for why this
    attains the infimum).  Meshes finer than the available depth are
    evaluated at the deepest available generation.
    """
    alpha = _check_alpha(alpha)
    mesh = float(mesh)
    if not mesh > 0.0:
        raise ValueError("mesh must be positive")
    spec = approx.spec
    span = spec.c2 - spec.c1
    if mesh >= span:
        k = 0
    else:
        k = max(0, math.ceil(math.log(mesh / span) / math.log(spec.keep_fraction) - 1e-9))
    k = min(k, approx.depth)
    length = spec.interval_length(k)
    return math.gamma(alpha + 1.0) * (2.0**k) * length**alpha


def estimate_dimension(spec: CantorSpec, max_depth: int = 16, tol: float = 1e-3) -> float:
    """Dimension estimate: the alpha where the measure stops growing.

    Uses the growth ratio r(alpha) = mu(depth) / mu(depth - 1) at the
    deepest available pair.  The measure diverges with depth when
    r > 1 + tol and decays when r < 1 - tol; bisection on alpha in (0, 1]
    finds the crossover.
    """
    max_depth = int(max_depth)
    if max_depth < 4:
        raise ValueError("max_depth must be at least 4")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    approx = build_cantor(spec, max_depth)
    mesh_fine = spec.interval_length(max_depth)
    mesh_coarse = spec.interval_length(max_depth - 1)

    def growth(alpha: float) -> float:
        return coarse_measure(approx, alpha, mesh_fine) / coarse_measure(approx, alpha, mesh_coarse)

    lo, hi = 1e-6, 1.0
    r_hi = growth(hi)
    if abs(r_hi - 1.0) <= tol:
        return hi
    if r_hi > 1.0 + tol:
        raise NonConvergenceError(
            "measure still grows with depth at alpha = 1; no crossover in (0, 1]"
        )
    if growth(lo) < 1.0 - tol:
        raise NonConvergenceError(
            "measure already decays with depth at alpha near 0; no crossover in (0, 1]"
        )
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        r = growth(mid)
        if abs(r - 1.0) <= tol:
            return mid
        if r > 1.0:
            lo = mid
        else:
            hi = mid
    raise NonConvergenceError("bisection exhausted 60 steps without entering the tolerance band")


class Staircase:
    """Integral staircase S(x) of a depth-k cover at exponent alpha.

    The lookup table stores S at every interval endpoint of the cover, so S
    is exactly flat across gaps and linear inside the deepest covered cells
    (the value of each cell is its alpha-measure, which realizes the
    self-similar weighting down to the configured depth).  Values are
    anchored so that S(c0) = 0 exactly.
    """

    def __init__(
        self,
        spec: CantorSpec,
        alpha: float,
        depth: int = 20,
        approx: FractalApprox | None = None,
    ) -> None:
        alpha = _check_alpha(alpha)
        depth = int(depth)
        if approx is None:
            approx = build_cantor(spec, depth)
        elif approx.spec != spec or approx.depth != depth:
            raise ValueError("supplied approx does not match spec and depth")
        self.spec = spec
        self.alpha = alpha
        self.depth = depth
        self.approx = approx
        # Mass of one covered cell. The table rises by exactly this much
        # across each cell, so flat values are exact multiples of it.
        self.cell_mass = math.gamma(alpha + 1.0) * approx.interval_length**alpha
        m = approx.n_intervals
        xs = np.empty(2 * m)
        xs[0::2] = approx.left
        xs[1::2] = approx.right
        ss = np.empty(2 * m)
        ss[0::2] = self.cell_mass * np.arange(m)
        ss[1::2] = self.cell_mass * np.arange(1, m + 1)
        xs.setflags(write=False)
        ss.setflags(write=False)
        self.xs = xs
        self.ss = ss
        self.total_measure = float(ss[-1])
        self._offset = float(np.interp(spec.anchor, xs, ss))

    @property
    def anchor(self) -> float:
        return self.spec.anchor

    def eval(self, x):
        """S(x) for scalar or array x in [c1, c2]."""
        arr = np.asarray(x, dtype=float)
        c1, c2 = self.spec.c1, self.spec.c2
        slack = 1e-9 * (c2 - c1)
        if np.any(arr < c1 - slack) or np.any(arr > c2 + slack):
            raise ValueError(f"x outside [{c1:g}, {c2:g}]")
        raw = np.interp(np.clip(arr, c1, c2), self.xs, self.ss)
        out = raw - self._offset
        return float(out) if arr.ndim == 0 else out

    __call__ = eval

    def inverse(self, s):
        """Right-continuous generalized inverse: inf{x : S(x) > s}.

        Values S is flat at (gap plateaus) map to the right end of the
        plateau; s = S(c2) maps to c2.
        """
        arr = np.asarray(s, dtype=float)
        raw = arr + self._offset
        top = self.ss[-1]
        slack = 1e-9 * max(top, 1.0)
        if np.any(raw < -slack) or np.any(raw > top + slack):
            lo = -self._offset
            hi = self.total_measure - self._offset
            raise ValueError(f"s outside attained range [{lo:g}, {hi:g}]")
        raw = np.clip(raw, 0.0, top)
        j = np.searchsorted(self.ss, raw, side="right")
        j = np.clip(j, 1, self.ss.size - 1)
        s0 = self.ss[j - 1]
        s1 = self.ss[j]
        x0 = self.xs[j - 1]
        x1 = self.xs[j]
        denom = s1 - s0
        safe = np.where(denom > 0.0, denom, 1.0)
        frac = np.where(denom > 0.0, (raw - s0) / safe, 0.0)
        out = x0 + frac * (x1 - x0)
        out = np.where(raw >= top, self.xs[-1], out)
        return float(out) if arr.ndim == 0 else out


def staircase_eval(stair: Staircase, x):
    """S(x); see :meth:`Staircase.eval`."""
    return stair.eval(x)


def staircase_inverse(stair: Staircase, s):
    """inf{x : S(x) > s}; see :meth:`Staircase.inverse`."""
    return stair.inverse(s)


def _distance_to_cover(approx: FractalApprox, x: float) -> float:
    i = int(np.searchsorted(approx.left, x, side="right")) - 1
    if i >= 0 and x <= approx.right[i]:
        return 0.0
    dist = math.inf
    if i >= 0:
        dist = x - float(approx.right[i])
    if i + 1 < approx.n_intervals:
        dist = min(dist, float(approx.left[i + 1]) - x)
    return dist


def fractal_derivative(h, x: float, stair: Staircase) -> float:
    """Derivative of h against the staircase at x.

    Estimates the limit of (h(y+) - h(y-)) / (S(y+) - S(y-)) over cover
    points y- < y+ shrinking toward x, with the y chosen through the
    staircase inverse so the S-increments halve each refinement; the last
    two quotients are Richardson-extrapolated.  Points farther than half a
    cell from the cover return 0 by definition.
    """
    x = float(x)
    approx = stair.approx
    if _distance_to_cover(approx, x) > 0.5 * approx.interval_length:
        return 0.0
    s_lo = stair.eval(stair.spec.c1)
    s_hi = stair.eval(stair.spec.c2)
    s0 = stair.eval(min(max(x, stair.spec.c1), stair.spec.c2))
    total = stair.total_measure
    floor = 64.0 * np.finfo(float).eps * max(total, 1.0)
    quotients = []
    for m in range(6, 17):
        delta = total * 2.0**-m
        s_plus = min(s0 + delta, s_hi)
        s_minus = max(s0 - delta, s_lo)
        y_plus = stair.inverse(s_plus)
        y_minus = stair.inverse(s_minus)
        ds = stair.eval(y_plus) - stair.eval(y_minus)
        if not ds > floor:
            continue
        quotients.append((float(h(y_plus)) - float(h(y_minus))) / ds)
    if not quotients:
        raise IllConditionedError(f"staircase increments underflow near x = {x:g}")
    if len(quotients) == 1:
        return quotients[0]
    return quotients[-1] + (quotients[-1] - quotients[-2]) / 3.0


@dataclass(frozen=True)
class FractalIntegral:
    """Midpoint value of an integral against the staircase, with lower and
    upper sums from per-cell min/max sampling of the integrand."""

    value: float
    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def _eval_on(h, xs: np.ndarray) -> np.ndarray:
    try:
        v = np.asarray(h(xs), dtype=float)
        if v.shape == xs.shape:
            return v
    except Exception:
        pass
    return np.fromiter((float(h(float(x))) for x in xs), dtype=float, count=xs.size)


def fractal_integral(h, a: float, b: float, stair: Staircase) -> FractalIntegral:
    """Integral of h against the staircase over [a, b].

    Sums h(midpoint) * (S increment) over the covered cells of the
    configured depth, clipped to [a, b].  Gaps carry no S increment and
    drop out.  ``lower`` and ``upper`` replace the midpoint sample by the
    min/max of h over {left, mid, right} per cell.
    """
    a = float(a)
    b = float(b)
    spec = stair.spec
    slack = 1e-9 * (spec.c2 - spec.c1)
    if not (spec.c1 - slack <= a <= b <= spec.c2 + slack):
        raise ValueError("require c1 <= a <= b <= c2")
    a = min(max(a, spec.c1), spec.c2)
    b = min(max(b, spec.c1), spec.c2)
    lo = np.maximum(stair.approx.left, a)
    hi = np.minimum(stair.approx.right, b)
    nonempty = lo < hi
    if not nonempty.any():
        return FractalIntegral(0.0, 0.0, 0.0)
    lo = lo[nonempty]
    hi = hi[nonempty]
    mid = 0.5 * (lo + hi)
    ds = stair.eval(hi) - stair.eval(lo)
    h_lo = _eval_on(h, lo)
    h_mid = _eval_on(h, mid)
    h_hi = _eval_on(h, hi)
    samples = np.stack([h_lo, h_mid, h_hi])
    if not np.isfinite(samples).all():
        raise ValueError("h takes non-finite values on [a, b]; integral undefined")
    value = float(np.dot(h_mid, ds))
    lower = float(np.dot(samples.min(axis=0), ds))
    upper = float(np.dot(samples.max(axis=0), ds))
    return FractalIntegral(value=value, lower=lower, upper=upper)
