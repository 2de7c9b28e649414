"""Delay vectors over a declared rationally independent basis.

A delay vector is stored as ``Lambda = M @ ell`` with ``M`` a nonnegative
integer matrix of full rational column rank and ``ell`` a positive basis
declared rationally independent by the user.  All equivalence-class logic
(lattice points ``n`` with equal ``Lambda . n``) runs on the integer
coefficients ``M^T n`` only, so it is exact regardless of how the basis
values are represented numerically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple

from .errors import (
    AmbiguousBoundary,
    ApproxNotPositive,
    DimensionMismatch,
    NonPositiveBasis,
    RankDeficientBasis,
    SurrogateSearchExceeded,
    ZeroDelay,
)


def time_tolerance(bound: float) -> float:
    """Absolute tolerance for comparing numeric times against ``bound``."""
    return 1e-9 * max(1.0, abs(bound))


@dataclass(frozen=True)
class DelayBasis:
    """Positive basis values; rational independence is declared, not inferred."""

    values: tuple[float, ...]
    exact: tuple[Fraction | None, ...]
    independence_declared: bool = True

    def __post_init__(self):
        if len(self.values) < 1:
            raise NonPositiveBasis("basis must have at least one value")
        if any(v <= 0 for v in self.values):
            raise NonPositiveBasis("basis values must be strictly positive")
        if any(e is not None and e <= 0 for e in self.exact):
            raise NonPositiveBasis("basis values must be strictly positive")

    @classmethod
    def of(cls, *values) -> "DelayBasis":
        """Build a basis; int/Fraction values are kept exact, floats are not."""
        numeric, exact = [], []
        for v in values:
            if isinstance(v, (int, Fraction)):
                exact.append(Fraction(v))
                numeric.append(float(v))
            else:
                exact.append(None)
                numeric.append(float(v))
        return cls(tuple(numeric), tuple(exact))

    @property
    def h(self) -> int:
        return len(self.values)

    @property
    def is_exact(self) -> bool:
        return all(e is not None for e in self.exact)


@total_ordering
@dataclass(frozen=True, eq=False)
class TimeStamp:
    """A nonnegative-integer combination of basis values.

    Equality compares the integer coefficient vector (exact); ordering uses
    the exact rational value when available and the numeric value otherwise,
    with the coefficients as a deterministic tie-break.
    """

    coeffs: tuple[int, ...]
    numeric: float
    exact: Fraction | None = None

    def __eq__(self, other):
        if not isinstance(other, TimeStamp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        if not isinstance(other, TimeStamp):
            return NotImplemented
        if self.exact is not None and other.exact is not None:
            if self.exact != other.exact:
                return self.exact < other.exact
        elif self.numeric != other.numeric:
            return self.numeric < other.numeric
        return self.coeffs < other.coeffs

    def value(self):
        """The exact value when available, else the numeric one."""
        return self.exact if self.exact is not None else self.numeric


class ClassEntry(NamedTuple):
    key: tuple[int, ...]
    representative: tuple[int, ...]
    time: TimeStamp


def as_lattice_point(seq) -> tuple[int, ...]:
    n = tuple(int(x) for x in seq)
    if any(x < 0 for x in n):
        raise ValueError(f"lattice point has a negative entry: {n}")
    return n


def _bound_exact(bound) -> Fraction:
    if isinstance(bound, TimeStamp):
        if bound.exact is None:
            raise ValueError("bound TimeStamp has no exact value")
        return bound.exact
    return Fraction(bound)


def _bound_numeric(bound) -> float:
    if isinstance(bound, TimeStamp):
        return bound.numeric
    return float(bound)


@dataclass(frozen=True)
class DelayVector:
    """Delays ``Lambda = M @ ell`` over a rationally independent basis."""

    basis: DelayBasis
    M: tuple[tuple[int, ...], ...]
    _delays: tuple[float, ...] = field(init=False, repr=False)
    _delays_exact: tuple = field(init=False, repr=False)

    def __post_init__(self):
        delays = tuple(
            sum(m * v for m, v in zip(row, self.basis.values)) for row in self.M)
        exacts = tuple(
            sum((m * e for m, e in zip(row, self.basis.exact)), Fraction(0))
            if self.basis.is_exact else None
            for row in self.M)
        object.__setattr__(self, "_delays", delays)
        object.__setattr__(self, "_delays_exact", exacts)

    @property
    def N(self) -> int:
        return len(self.M)

    @property
    def h(self) -> int:
        return self.basis.h

    @property
    def delays(self) -> tuple[float, ...]:
        return self._delays

    @property
    def delays_exact(self) -> tuple:
        return self._delays_exact

    @property
    def is_exact(self) -> bool:
        return self.basis.is_exact

    @property
    def is_commensurable(self) -> bool:
        return self.h == 1

    @property
    def lambda_min(self) -> float:
        return min(self._delays)

    @property
    def lambda_max(self) -> float:
        return max(self._delays)

    def lambda_max_stamp(self) -> TimeStamp:
        j = max(range(self.N), key=lambda i: self._delays[i])
        return self.time_of_key(self.M[j])

    # -- class structure ---------------------------------------------------

    def class_key(self, n) -> tuple[int, ...]:
        n = as_lattice_point(n)
        if len(n) != self.N:
            raise DimensionMismatch(f"lattice point has length {len(n)}, expected {self.N}")
        return tuple(sum(row[k] * nj for row, nj in zip(self.M, n))
                     for k in range(self.h))

    def time_of(self, n) -> TimeStamp:
        return self.time_of_key(self.class_key(n))

    def time_of_key(self, coeffs) -> TimeStamp:
        coeffs = tuple(int(c) for c in coeffs)
        numeric = sum(c * v for c, v in zip(coeffs, self.basis.values))
        exact = None
        if self.basis.is_exact:
            exact = sum((c * e for c, e in zip(coeffs, self.basis.exact)), Fraction(0))
        return TimeStamp(coeffs, float(numeric), exact)

    def compare_time(self, ts: TimeStamp, bound, warn: bool = False) -> int:
        """-1, 0, +1 for the class time below, at, or above ``bound``.

        Exact bases compare exactly; otherwise times within the tolerance of
        the bound count as boundary hits and optionally raise a warning.
        """
        if self.basis.is_exact and ts.exact is not None:
            b = _bound_exact(bound)
            return (ts.exact > b) - (ts.exact < b)
        b = _bound_numeric(bound)
        diff = ts.numeric - b
        if abs(diff) <= time_tolerance(b):
            if warn and diff != 0.0:
                warnings.warn(
                    f"class time {ts.numeric} lies within tolerance of bound {b}",
                    AmbiguousBoundary, stacklevel=3)
            return 0
        return -1 if diff < 0 else 1

    def lattice_points_upto(self, bound) -> list[tuple[int, ...]]:
        """All n in N^N with Lambda . n <= bound, in lexicographic order."""
        out: list[tuple[int, ...]] = []
        n = [0] * self.N
        zero = (0,) * self.h

        def rec(j, coeffs):
            if j == self.N:
                out.append(tuple(n))
                return
            row = self.M[j]
            cur = coeffs
            k = 0
            while self.compare_time(self.time_of_key(cur), bound) <= 0:
                n[j] = k
                rec(j + 1, cur)
                cur = tuple(c + r for c, r in zip(cur, row))
                k += 1
            n[j] = 0

        if self.compare_time(self.time_of_key(zero), bound) <= 0:
            rec(0, zero)
        return out

    def enumerate_classes(self, T, strict: bool = False) -> list[ClassEntry]:
        """Equivalence classes with time <= T (or < T), sorted by time.

        Each class appears once, with its lexicographically smallest
        representative.  Boundary hits within the numeric tolerance raise
        :class:`AmbiguousBoundary` warnings.
        """
        if _bound_numeric(T) < -time_tolerance(_bound_numeric(T)):
            raise ValueError("horizon T must be nonnegative")
        reps: dict[tuple[int, ...], tuple[int, ...]] = {}
        for p in self.lattice_points_upto(T):
            key = self.class_key(p)
            if key not in reps:
                reps[key] = p
        entries = []
        for key, rep in reps.items():
            ts = self.time_of_key(key)
            c = self.compare_time(ts, T, warn=True)
            if c < 0 or (c == 0 and not strict):
                entries.append(ClassEntry(key, rep, ts))
        entries.sort(key=lambda e: e.time)
        return entries

    def class_members(self, key) -> list[tuple[int, ...]]:
        """All lattice points n >= 0 with M^T n equal to the class key."""
        key = tuple(int(c) for c in key)
        if len(key) != self.h or any(c < 0 for c in key):
            raise ValueError(f"invalid class key {key}")
        out: list[tuple[int, ...]] = []
        n = [0] * self.N

        def rec(j, res):
            if j == self.N:
                if all(r == 0 for r in res):
                    out.append(tuple(n))
                return
            row = self.M[j]
            ub = min(res[k] // row[k] for k in range(self.h) if row[k] > 0)
            for nj in range(ub + 1):
                n[j] = nj
                rec(j + 1, tuple(r - nj * c for r, c in zip(res, row)))
            n[j] = 0

        rec(0, key)
        return out


def _rational_rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q by fraction Gaussian elimination."""
    work = [list(map(Fraction, row)) for row in rows]
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if work[r][c] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pv = work[rank][c]
        for r in range(rank + 1, nrows):
            if work[r][c] != 0:
                f = work[r][c] / pv
                for cc in range(c, ncols):
                    work[r][cc] -= work[rank][cc] * f
        rank += 1
        if rank == nrows:
            break
    return rank


def _collapse_rational_basis(basis: DelayBasis, M):
    """Rewrite an all-rational basis as a single rational basis value.

    The common value is the largest lambda with every basis value an integer
    multiple of it, so the resulting integer matrix is canonical for the
    declared values.
    """
    fracs = [e for e in basis.exact]
    denom_lcm = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom_lcm) for f in fracs]
    g = math.gcd(*ints)
    lam = Fraction(g, denom_lcm)
    mult = [z // g for z in ints]
    new_m = tuple((sum(mj * r for mj, r in zip(row, mult)),) for row in M)
    return DelayBasis.of(lam), new_m


def make_delay_vector(basis: DelayBasis, M) -> DelayVector:
    """Validated construction of a delay vector.

    An all-rational basis with h > 1 contradicts the independence declaration
    and is collapsed to a single-value commensurable basis.
    """
    rows = tuple(tuple(int(x) for x in row) for row in M)
    if any(any(x < 0 for x in row) for row in rows):
        raise ValueError("M must have nonnegative integer entries")
    if any(len(row) != basis.h for row in rows):
        raise DimensionMismatch("M column count differs from basis size")
    if any(all(x == 0 for x in row) for row in rows):
        raise ZeroDelay("every delay must be a nonzero combination of basis values")
    if basis.is_exact and basis.h > 1:
        basis, rows = _collapse_rational_basis(basis, rows)
    if _rational_rank([list(row) for row in rows]) < basis.h:
        raise RankDeficientBasis(
            f"rank of M is below the declared basis size h={basis.h}")
    return DelayVector(basis, rows)


def preorder_leq(lam: DelayVector, other: DelayVector) -> bool:
    """Whether Z(Lambda) is contained in Z(L), i.e. Lambda is at most as
    rationally dependent as L.  Exact rational rank comparison."""
    if lam.N != other.N:
        raise DimensionMismatch("delay vectors must have the same number of delays")
    m_l = [list(row) for row in lam.M]
    joint = [list(a) + list(b) for a, b in zip(lam.M, other.M)]
    return _rational_rank(joint) == _rational_rank(m_l)


def commensurable_approx(lam: DelayVector, n: int) -> DelayVector:
    """The rational approximation with basis 1/n and matrix M floor(n ell)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    floors = []
    for v, e in zip(lam.basis.values, lam.basis.exact):
        floors.append(int(n * e) if e is not None else math.floor(n * v))
    new_m = tuple((sum(mj * f for mj, f in zip(row, floors)),) for row in lam.M)
    if any(row[0] <= 0 for row in new_m):
        raise ApproxNotPositive(
            f"n={n} is too small; some approximated delay is not positive")
    return DelayVector(DelayBasis.of(Fraction(1, n)), new_m)


def commensurable_surrogate(lam: DelayVector, T, eps: float,
                            max_n: int = 20000) -> DelayVector:
    """Smallest-n commensurable approximation preserving the equality pattern
    of class times up to T, with componentwise ratio below 1 + eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if _bound_numeric(T) < 0:
        raise ValueError("T must be nonnegative")
    t_num = _bound_numeric(T)
    start = max(1, math.ceil(1.0 / min(lam.basis.values)))
    for n in range(start, max_n + 1):
        try:
            approx = commensurable_approx(lam, n)
        except ApproxNotPositive:
            continue
        if not all(orig < (1.0 + eps) * appr
                   for orig, appr in zip(lam.delays, approx.delays)):
            continue
        if _pattern_preserved(lam, approx, t_num, eps):
            return approx
    raise SurrogateSearchExceeded(f"no valid surrogate found with n <= {max_n}")


def _pattern_preserved(lam: DelayVector, approx: DelayVector,
                       t_num: float, eps: float) -> bool:
    lam_basis = approx.basis.exact[0]
    pts = lam.lattice_points_upto((1.0 + eps) * t_num)
    by_key: dict[tuple, set] = {}
    by_val: dict[Fraction, set] = {}
    for p in pts:
        by_key.setdefault(lam.class_key(p), set()).add(p)
        val = lam_basis * sum(row[0] * nj for row, nj in zip(approx.M, p))
        by_val.setdefault(val, set()).add(p)
    for p in pts:
        if lam.compare_time(lam.time_of(p), t_num) <= 0:
            val = lam_basis * sum(row[0] * nj for row, nj in zip(approx.M, p))
            if by_key[lam.class_key(p)] != by_val[val]:
                return False
    return True


def epsilon0(lam: DelayVector, T) -> float:
    """Gap radius: smaller than every gap between class times up to T and
    than the overshoot of the first class time beyond T."""
    if _bound_numeric(T) <= 0:
        raise ValueError("T must be positive")
    slack = lam.lambda_max
    bound = (_bound_exact(T) + lam.lambda_max_stamp().exact
             if lam.is_exact else _bound_numeric(T) + slack)
    keys = {lam.class_key(p) for p in lam.lattice_points_upto(bound)}
    below, above = [], []
    for key in keys:
        ts = lam.time_of_key(key)
        (below if lam.compare_time(ts, T) <= 0 else above).append(ts)
    if not above:
        # tolerance edge: widen once, a class time must exist in (T, T+max]
        keys = {lam.class_key(p)
                for p in lam.lattice_points_upto(_bound_numeric(T) + 2 * slack)}
        above = [lam.time_of_key(k) for k in keys
                 if lam.compare_time(lam.time_of_key(k), T) > 0]
    t_num = _bound_numeric(T)
    overshoot = min(ts.numeric - t_num for ts in above)
    times = sorted(ts.numeric for ts in below)
    gaps = [b - a for a, b in zip(times, times[1:])]
    gap = min(gaps) if gaps else math.inf
    return float(min(gap, overshoot))
