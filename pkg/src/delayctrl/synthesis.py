"""Solution evaluation and steering/tracking control synthesis.

Two independent evaluation routes are provided: the explicit representation
formula (initial-condition sum plus class-sum control terms) and direct
unfolding of the recursion.  Synthesis inverts the stacked generator matrix
on its range: point steering places one impulse per class at ``T`` minus the
class time; interval tracking fills a window of width ``eps`` below the gap
radius around each of those instants.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .coefficients import SystemSpec, XiTable, controllability_generators
from .controllability import RankBackend, is_relatively_controllable
from .delays import DelayVector, TimeStamp, epsilon0, time_tolerance
from .errors import EpsilonClamped, NotControllableAtT, RecursionBudgetExceeded
from .scalars import EXACT
from .signals import SignalFunction

DEFAULT_RECURSION_BUDGET = 2_000_000


def _as_time(t, lam: DelayVector):
    """Use exact rational time arithmetic whenever the basis permits it."""
    if lam.is_exact and not isinstance(t, float):
        return Fraction(t)
    if lam.is_exact and isinstance(t, float):
        return Fraction(t)
    return float(t)


def _shift(t, ts: TimeStamp, lam: DelayVector):
    """t - (class time), in exact arithmetic when available."""
    if lam.is_exact and isinstance(t, Fraction):
        return t - ts.exact
    return float(t) - ts.numeric


def _sign(value, scale: float) -> int:
    """-1, 0, +1 with a tolerance for float time arithmetic."""
    if isinstance(value, Fraction):
        return (value > 0) - (value < 0)
    tol = 1e-12 * max(1.0, scale)
    if abs(value) <= tol:
        return 0
    return -1 if value < 0 else 1


def free_response(sys: SystemSpec, lam: DelayVector, x0, t,
                  table: XiTable | None = None) -> np.ndarray:
    """Initial-condition part of the solution at time t >= 0."""
    table = table if table is not None else XiTable(sys)
    out = linalg.zero_vector(sys.d, sys.scalar_mode)
    if x0 is None:
        return out
    t = _as_time(t, lam)
    scale = max(1.0, abs(float(t)), lam.lambda_max)
    bound = (Fraction(t) + lam.lambda_max_stamp().exact if lam.is_exact
             else float(t) + lam.lambda_max)
    for n in lam.lattice_points_upto(bound):
        ts = lam.time_of(n)
        tau = _shift(t, ts, lam)
        if _sign(tau, scale) >= 0:
            continue
        for j in range(sys.N):
            if n[j] == 0:
                continue
            if _sign(tau + (lam.delays_exact[j] if isinstance(tau, Fraction)
                            else lam.delays[j]), scale) < 0:
                continue
            pred = n[:j] + (n[j] - 1,) + n[j + 1:]
            out = out + table.xi(pred) @ (sys.A[j] @ x0(tau))
    return out


def solve_explicit(sys: SystemSpec, lam: DelayVector, x0, u, t,
                   table: XiTable | None = None) -> np.ndarray:
    """Solution at time t by the explicit representation formula."""
    table = table if table is not None else XiTable(sys)
    t = _as_time(t, lam)
    out = free_response(sys, lam, x0, t, table=table)
    if u is None:
        return out
    scale = max(1.0, abs(float(t)), lam.lambda_max)
    for block in controllability_generators(sys, lam, t, table=table):
        tau = _shift(t, block.time, lam)
        if not isinstance(tau, Fraction) and tau < 0:
            tau = 0.0  # boundary round-off: class time included means tau >= 0
        out = out + block.matrix @ np.asarray(u(tau))
    return out


def solve_recursive(sys: SystemSpec, lam: DelayVector, x0, u, t,
                    budget: int = DEFAULT_RECURSION_BUDGET) -> np.ndarray:
    """Solution at time t by direct unfolding of the difference equation.

    Independent of the explicit formula; memoized on the lattice offset from
    t.  Raises when the number of visited states exceeds the budget.
    """
    t = _as_time(t, lam)
    scale = max(1.0, abs(float(t)), lam.lambda_max)
    zero = linalg.zero_vector(sys.d, sys.scalar_mode)
    cache: dict[tuple[int, ...], np.ndarray] = {}

    def tau_of(n):
        return _shift(t, lam.time_of(n), lam)

    origin = (0,) * sys.N
    stack = [origin]
    while stack:
        if len(cache) > budget:
            raise RecursionBudgetExceeded(
                f"recursive solve visited more than {budget} states")
        cur = stack[-1]
        if cur in cache:
            stack.pop()
            continue
        tau = tau_of(cur)
        if _sign(tau, scale) < 0:
            cache[cur] = np.asarray(x0(tau)) if x0 is not None else zero
            stack.pop()
            continue
        succs = [cur[:j] + (cur[j] + 1,) + cur[j + 1:] for j in range(sys.N)]
        missing = [s for s in succs if s not in cache]
        if missing:
            stack.extend(missing)
            continue
        total = sys.B @ np.asarray(u(tau)) if u is not None else zero
        for j, s in enumerate(succs):
            total = total + sys.A[j] @ cache[s]
        cache[cur] = total
        stack.pop()
    return cache[origin]


@dataclass
class ControlPlan:
    """A finitely described control input.

    Point-steering plans are impulse lists (class time stamp, value at
    ``T`` minus that time); tracking plans carry one window per class with a
    segment function of the local offset.  The plan evaluates to zero outside
    its declared support.
    """

    kind: str  # "point" or "tracking"
    T: object
    m: int
    epsilon: object = 0
    impulses: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    scalar_mode: str = "numeric"

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t) -> np.ndarray:
        zero = linalg.zero_vector(self.m, self.scalar_mode)
        if self.kind == "point":
            for ts, when, value in self.impulses:
                if self._matches(t, when):
                    return value
            return zero
        for ts, (a, b), func in self.segments:
            exact = isinstance(t, Fraction) and isinstance(a, Fraction) \
                and isinstance(b, Fraction)
            if exact:
                if a <= t <= b:
                    return func(t - a)
            else:
                tol = 1e-12 * max(1.0, abs(float(b)))
                tf = float(t)
                if float(a) - tol <= tf <= float(b) + tol:
                    s = min(max(tf - float(a), 0.0), float(b) - float(a))
                    return func(s)
        return zero

    @staticmethod
    def _matches(t, when) -> bool:
        if isinstance(t, Fraction) and isinstance(when, Fraction):
            return t == when
        return abs(float(t) - float(when)) <= 1e-12 * max(1.0, abs(float(when)))

    def support_times(self) -> list:
        if self.kind == "point":
            return [when for _, when, _ in self.impulses]
        return [interval for _, interval, _ in self.segments]

    def to_json(self, samples: int = 11) -> dict:
        from .scalars import scalar_to_json
        out = {"kind": self.kind, "T": float(self.T), "epsilon": float(self.epsilon),
               "m": self.m}
        if self.kind == "point":
            out["impulses"] = [
                {"class_coeffs": list(ts.coeffs), "time": float(when),
                 "value": [scalar_to_json(v) for v in value]}
                for ts, when, value in self.impulses]
        else:
            # segment functions are sampled; closed forms depend on x0/x1
            segs = []
            for ts, (a, b), func in self.segments:
                grid = np.linspace(0.0, float(b) - float(a), samples)
                segs.append({
                    "class_coeffs": list(ts.coeffs),
                    "interval": [float(a), float(b)],
                    "sample_offsets": [float(s) for s in grid],
                    "sample_values": [[scalar_to_json(v) for v in func(s)]
                                      for s in grid],
                })
            out["segments"] = segs
        return out


def evaluate_plan(plan: ControlPlan, t) -> np.ndarray:
    return plan.evaluate(t)


def _steering_data(sys, lam, T, backend, table):
    backend = backend or RankBackend.for_system(sys)
    table = table if table is not None else XiTable(sys)
    report = is_relatively_controllable(sys, lam, T, backend, table)
    if not report.controllable:
        raise NotControllableAtT(
            f"system is not relatively controllable at T={T}")
    blocks = controllability_generators(sys, lam, T, table=table)
    stacked = linalg.hstack([b.matrix for b in blocks], sys.d, sys.scalar_mode)
    if backend.mode != sys.scalar_mode and backend.mode == "numeric":
        stacked = linalg.to_numeric(stacked)
    minv = linalg.right_inverse(stacked, backend.mode, backend.numeric_tolerance)
    return backend, table, blocks, minv


def synthesize_point_control(sys: SystemSpec, lam: DelayVector, x0, x1,
                             T, backend: RankBackend | None = None,
                             table: XiTable | None = None) -> ControlPlan:
    """One impulse per class: u(T - class time) solves the steering system."""
    backend, table, blocks, minv = _steering_data(sys, lam, T, backend, table)
    t_val = _as_time(T, lam)
    x1 = np.asarray(x1)
    target = x1 - free_response(sys, lam, x0, t_val, table=table)
    big_u = minv @ target
    impulses = []
    for i, block in enumerate(blocks):
        value = big_u[i * sys.m:(i + 1) * sys.m]
        when = _shift(t_val, block.time, lam)
        impulses.append((block.time, when, value))
    return ControlPlan(kind="point", T=t_val, m=sys.m, impulses=impulses,
                       scalar_mode=sys.scalar_mode)


def synthesize_tracking_control(sys: SystemSpec, lam: DelayVector, x0,
                                x1: SignalFunction, T, eps,
                                backend: RankBackend | None = None,
                                table: XiTable | None = None) -> ControlPlan:
    """Window controls reproducing a target trajectory on [T, T + eps].

    Each class gets the interval [T - class time, T - class time + eps]; the
    windows are pairwise disjoint because eps is kept below the gap radius.
    """
    eps = float(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    eps0 = epsilon0(lam, T)
    if eps >= eps0:
        warnings.warn(
            f"eps={eps} is not below the gap radius {eps0}; clamping to {eps0 / 2}",
            EpsilonClamped, stacklevel=2)
        eps = eps0 / 2
    backend, table, blocks, minv = _steering_data(sys, lam, T, backend, table)
    t_val = _as_time(T, lam)
    exact = sys.is_exact and lam.is_exact and isinstance(t_val, Fraction)
    eps_val = Fraction(eps) if exact else eps

    def big_u(s):
        target = np.asarray(x1(s)) - free_response(sys, lam, x0, t_val + s,
                                                   table=table)
        return minv @ target

    segments = []
    for i, block in enumerate(blocks):
        start = _shift(t_val, block.time, lam)
        lo = i * sys.m
        hi = lo + sys.m

        def func(s, lo=lo, hi=hi):
            return big_u(s)[lo:hi]

        segments.append((block.time, (start, start + eps_val), func))
    return ControlPlan(kind="tracking", T=t_val, m=sys.m, epsilon=eps_val,
                       segments=segments, scalar_mode=sys.scalar_mode)
