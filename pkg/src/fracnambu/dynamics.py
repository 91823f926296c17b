"""Flows of Nambu systems in staircase time.

The fractal equation of motion is solved by conjugation: integrate the
ordinary system dy/ds = V(y) with fixed-step RK4, then read the trajectory
off at s = S(t) for the chosen time model.  Gaps of the time set therefore
freeze the state exactly (equal S means an identical interpolation query),
and alpha = 1 on a full interval reduces to the classical flow.

Interpolation between integration nodes is linear; that is the accuracy
floor of subordinated trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .brackets import NambuSystem, nambu_vector_field
from .cantor import Staircase

__all__ = [
    "ConservationEntry",
    "ConservationReport",
    "IntegrationBlowupError",
    "SPath",
    "TimeModel",
    "Trajectory",
    "conservation_report",
    "integrate_s_time",
    "subordinate",
    "trajectory_to_csv",
]

_TIME_KINDS = ("exact-staircase", "power-law", "classical")


class IntegrationBlowupError(RuntimeError):
    """State became non-finite during integration.

    ``last_valid`` is the index of the last finite sample and ``partial``
    the path up to it.
    """

    def __init__(self, message: str, last_valid: int, partial: "SPath") -> None:
        super().__init__(message)
        self.last_valid = last_valid
        self.partial = partial


@dataclass(frozen=True)
class TimeModel:
    """Map from physical time t to flow time s.

    exact-staircase: s = S(t) for a supplied staircase (t must lie in its
    domain).  power-law: s = t**alpha with 0 < alpha <= 1.  classical:
    s = t.
    """

    kind: str
    stair: Staircase | None = None
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _TIME_KINDS:
            raise ValueError(f"kind must be one of {', '.join(_TIME_KINDS)}")
        if self.kind == "exact-staircase":
            if self.stair is None:
                raise ValueError("exact-staircase mode requires a Staircase")
        elif self.kind == "power-law":
            if not (math.isfinite(self.alpha) and 0.0 < self.alpha <= 1.0):
                raise ValueError("alpha must lie in (0,1]")
        else:
            if self.alpha != 1.0:
                raise ValueError("classical mode fixes alpha = 1")

    @property
    def effective_alpha(self) -> float:
        return self.stair.alpha if self.kind == "exact-staircase" else self.alpha

    def s_of(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exact-staircase":
            return self.stair.eval(t)
        if self.kind == "power-law":
            if np.any(t < 0.0):
                raise ValueError("power-law time change needs t >= 0")
            return np.power(t, self.alpha)
        return t + 0.0


@dataclass(frozen=True)
class SPath:
    """Solution nodes of dy/ds = V(y): s values, states, invariant values."""

    s: np.ndarray
    states: np.ndarray
    invariants: np.ndarray

    @property
    def n(self) -> int:
        return int(self.states.shape[1])


@dataclass(frozen=True)
class Trajectory:
    """Time-indexed samples (t, s = S(t), state, invariant values)."""

    t: np.ndarray
    s: np.ndarray
    states: np.ndarray
    invariants: np.ndarray

    @property
    def n(self) -> int:
        return int(self.states.shape[1])


def _invariant_matrix(system: NambuSystem, states: np.ndarray) -> np.ndarray:
    cols = []
    for ham in system.hamiltonians:
        try:
            v = np.asarray(ham.fn(states), dtype=float)
            if v.shape != (len(states),):
                raise ValueError
        except Exception:
            v = np.fromiter(
                (float(ham.fn(row)) for row in states), dtype=float, count=len(states)
            )
        cols.append(v)
    return np.stack(cols, axis=-1)


def integrate_s_time(system: NambuSystem, x0, s_max: float, step: float) -> SPath:
    """Fixed-step RK4 solution of dy/ds = V(y) on [0, s_max].

    The node spacing is exactly ``step``; the last node is the first
    multiple of ``step`` at or beyond ``s_max``, so the path always covers
    the requested range.  Invariant values are recorded per node.
    """
    x0 = np.asarray(x0, dtype=float)
    n = system.n
    if x0.shape != (n,):
        raise ValueError(f"x0 must have {n} coordinates")
    if not np.isfinite(x0).all():
        raise ValueError("x0 must be finite")
    s_max = float(s_max)
    step = float(step)
    if not s_max > 0.0:
        raise ValueError("s_max must be positive")
    if not step > 0.0:
        raise ValueError("step must be positive")
    field = nambu_vector_field(system)
    nsteps = int(math.ceil(s_max / step - 1e-9))
    states = np.empty((nsteps + 1, n))
    states[0] = x0
    h = step
    half = 0.5 * h
    sixth = h / 6.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(nsteps):
            x = states[k]
            k1 = field(x)
            k2 = field(x + half * k1)
            k3 = field(x + half * k2)
            k4 = field(x + h * k3)
            nxt = x + sixth * (k1 + 2.0 * (k2 + k3) + k4)
            if not np.isfinite(nxt).all():
                kept = states[: k + 1].copy()
                partial = SPath(
                    s=step * np.arange(k + 1),
                    states=kept,
                    invariants=_invariant_matrix(system, kept),
                )
                raise IntegrationBlowupError(
                    f"state became non-finite at s = {(k + 1) * step:.6g}; "
                    f"last valid sample index {k}",
                    last_valid=k,
                    partial=partial,
                )
            states[k + 1] = nxt
    return SPath(
        s=step * np.arange(nsteps + 1),
        states=states,
        invariants=_invariant_matrix(system, states),
    )


def subordinate(path: SPath, model: TimeModel, t_grid) -> Trajectory:
    """Read the s-path off at s = S(t): x(t) = y(S(t)).

    States (and invariant values) are interpolated linearly in s between
    integration nodes.  The grid must be strictly increasing and its
    largest S(t) must be covered by the path.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t grid must be a non-empty 1-D array")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise ValueError("t grid must be strictly increasing")
    s = np.asarray(model.s_of(t), dtype=float)
    covered = float(path.s[-1])
    s_need = float(s[-1])
    if s_need > covered * (1.0 + 1e-12) + 1e-12:
        raise ValueError(
            f"t grid requires s_max >= {s_need:.17g} but the path covers only {covered:.17g}"
        )
    if float(s[0]) < float(path.s[0]) - 1e-12:
        raise ValueError(f"t grid starts before the path (s = {float(s[0]):.17g})")
    states = np.stack(
        [np.interp(s, path.s, path.states[:, i]) for i in range(path.states.shape[1])], axis=-1
    )
    invariants = np.stack(
        [np.interp(s, path.s, path.invariants[:, j]) for j in range(path.invariants.shape[1])],
        axis=-1,
    )
    return Trajectory(t=t, s=s, states=states, invariants=invariants)


@dataclass(frozen=True)
class ConservationEntry:
    label: str
    initial: float
    max_drift: float
    mean_drift: float


@dataclass(frozen=True)
class ConservationReport:
    entries: tuple

    @property
    def max_drift(self) -> float:
        return max(e.max_drift for e in self.entries)

    def as_dict(self) -> dict:
        return {
            e.label: {
                "initial": e.initial,
                "max_drift": e.max_drift,
                "mean_drift": e.mean_drift,
            }
            for e in self.entries
        }


def conservation_report(traj, system: NambuSystem | None = None) -> ConservationReport:
    """Relative drift of each invariant along a trajectory or s-path.

    Drift is |H_j(x) - H_j(x_0)| / max(1, |H_j(x_0)|).  When ``system`` is
    given the invariants are re-evaluated exactly at the sampled states;
    otherwise the recorded (possibly interpolated) columns are used.
    """
    if system is not None:
        inv = _invariant_matrix(system, traj.states)
        labels = [h.label or f"H{j + 1}" for j, h in enumerate(system.hamiltonians)]
    else:
        inv = traj.invariants
        labels = [f"H{j + 1}" for j in range(inv.shape[1])]
    if inv.shape[0] == 0:
        raise ValueError("trajectory is empty")
    ref = inv[0]
    denom = np.maximum(1.0, np.abs(ref))
    drift = np.abs(inv - ref) / denom
    entries = tuple(
        ConservationEntry(
            label=labels[j],
            initial=float(ref[j]),
            max_drift=float(drift[:, j].max()),
            mean_drift=float(drift[:, j].mean()),
        )
        for j in range(inv.shape[1])
    )
    return ConservationReport(entries=entries)


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV text: header t,s,x1,...,xn,H1,...,H{n-1}; 17 significant digits,
    LF line endings."""
    n = traj.states.shape[1]
    m = traj.invariants.shape[1]
    header = (
        "t,s,"
        + ",".join(f"x{i + 1}" for i in range(n))
        + ","
        + ",".join(f"H{j + 1}" for j in range(m))
    )
    lines = [header]
    for k in range(traj.t.size):
        row = [traj.t[k], traj.s[k], *traj.states[k], *traj.invariants[k]]
        lines.append(",".join(format(float(v), ".17g") for v in row))
    return "\n".join(lines) + "\n"
