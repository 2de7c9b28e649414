"""Recursive matrix coefficients and their class-sums.

The coefficient attached to a multi-index ``n`` generalizes matrix powers to
several non-commuting matrices: it is zero outside the nonnegative orthant,
the identity at the origin, and otherwise the sum of ``A_k`` times the
coefficient at ``n - e_k``.  Class-sums add all coefficients whose delay
combinations coincide, and multiply the control in the solution formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import linalg
from .delays import ClassEntry, DelayVector
from .errors import ClassBeyondHorizon, DimensionMismatch
from .scalars import EXACT, NUMERIC, matrix_from_data


@dataclass(frozen=True)
class SystemSpec:
    """The data (A_1, ..., A_N, B) of a controlled delay difference equation."""

    d: int
    m: int
    N: int
    A: tuple[np.ndarray, ...]
    B: np.ndarray
    scalar_mode: str = NUMERIC

    def __post_init__(self):
        if self.scalar_mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown scalar mode {self.scalar_mode!r}")
        for a in self.A:
            if a.shape != (self.d, self.d):
                raise DimensionMismatch(
                    f"A block has shape {a.shape}, expected {(self.d, self.d)}")
        if self.B.shape != (self.d, self.m):
            raise DimensionMismatch(
                f"B has shape {self.B.shape}, expected {(self.d, self.m)}")
        if len(self.A) != self.N:
            raise DimensionMismatch(f"expected {self.N} A matrices, got {len(self.A)}")

    @classmethod
    def create(cls, A, B, scalar_mode: str = NUMERIC) -> "SystemSpec":
        """Build from nested lists (or arrays) of raw entries."""
        mats = tuple(matrix_from_data(a, scalar_mode) for a in A)
        b = matrix_from_data(B, scalar_mode)
        d = b.shape[0]
        return cls(d=d, m=b.shape[1], N=len(mats), A=mats, B=b,
                   scalar_mode=scalar_mode)

    @property
    def is_exact(self) -> bool:
        return self.scalar_mode == EXACT


class XiTable:
    """Memoized table of the recursive coefficients for one system.

    Entries are computed on demand along increasing one-norm so recursion
    depth stays bounded; the table is read-only once queried values exist.
    """

    def __init__(self, sys: SystemSpec):
        self.sys = sys
        self._zero = linalg.zeros(sys.d, sys.d, sys.scalar_mode)
        self._cache: dict[tuple[int, ...], np.ndarray] = {
            (0,) * sys.N: linalg.eye(sys.d, sys.scalar_mode)}

    def xi(self, n) -> np.ndarray:
        n = tuple(int(x) for x in n)
        if len(n) != self.sys.N:
            raise DimensionMismatch(
                f"multi-index has length {len(n)}, expected {self.sys.N}")
        if any(x < 0 for x in n):
            return self._zero
        cache = self._cache
        if n in cache:
            return cache[n]
        stack = [n]
        while stack:
            cur = stack[-1]
            if cur in cache:
                stack.pop()
                continue
            preds = [cur[:k] + (cur[k] - 1,) + cur[k + 1:]
                     for k in range(self.sys.N) if cur[k] > 0]
            missing = [p for p in preds if p not in cache]
            if missing:
                stack.extend(missing)
                continue
            total = self._zero
            for k in range(self.sys.N):
                if cur[k] > 0:
                    pred = cur[:k] + (cur[k] - 1,) + cur[k + 1:]
                    total = total + self.sys.A[k] @ cache[pred]
            cache[cur] = total
            stack.pop()
        return cache[n]


def xi(table: XiTable, n) -> np.ndarray:
    """Coefficient matrix at multi-index ``n`` (negative entries give zero)."""
    return table.xi(n)


def xi_hat(sys: SystemSpec, lam: DelayVector, key, horizon=None,
           table: XiTable | None = None) -> np.ndarray:
    """Class-sum: sum of coefficients over all members of the class.

    The class is finite because all members share the class time; ``horizon``
    (when given) rejects classes beyond it.
    """
    key = tuple(int(c) for c in key)
    if horizon is not None:
        ts = lam.time_of_key(key)
        if lam.compare_time(ts, horizon) > 0:
            raise ClassBeyondHorizon(
                f"class at time {ts.numeric} exceeds horizon {horizon}")
    table = table if table is not None else XiTable(sys)
    total = linalg.zeros(sys.d, sys.d, sys.scalar_mode)
    for member in lam.class_members(key):
        total = total + table.xi(member)
    return total


class XiHatTable:
    """Class-sum table for a fixed system, delay vector, and horizon."""

    def __init__(self, sys: SystemSpec, lam: DelayVector, horizon,
                 table: XiTable | None = None):
        self.sys = sys
        self.lam = lam
        self.horizon = horizon
        self._xi = table if table is not None else XiTable(sys)
        self._cache: dict[tuple[int, ...], np.ndarray] = {}

    def get(self, key) -> np.ndarray:
        key = tuple(int(c) for c in key)
        if key not in self._cache:
            self._cache[key] = xi_hat(self.sys, self.lam, key,
                                      horizon=self.horizon, table=self._xi)
        return self._cache[key]

    def to_json(self) -> dict:
        from .scalars import scalar_to_json
        return {",".join(map(str, k)): [[scalar_to_json(x) for x in row]
                                        for row in mat]
                for k, mat in self._cache.items()}


def diblik_xi_hat(A: np.ndarray, k: int, n) -> np.ndarray:
    """Closed-form class-sum for the system x(t) = x(t-1) + A x(t-k) + Bu(t).

    Independent oracle: a binomial-weighted polynomial in A, coinciding with
    the discrete delayed matrix exponential.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    n1, n2 = (int(x) for x in n)
    if n1 < 0 or n2 < 0:
        raise ValueError("multi-index entries must be nonnegative")
    d = A.shape[0]
    mode = EXACT if linalg.is_exact_matrix(A) else NUMERIC
    total = linalg.zeros(d, d, mode)
    power = linalg.eye(d, mode)
    jmax = n1 // k + n2
    for j in range(jmax + 1):
        c = comb(n1 + k * n2 - j * (k - 1), j)
        total = total + c * power
        if j < jmax:
            power = A @ power
    return total


@dataclass(frozen=True)
class GeneratorBlock:
    key: tuple[int, ...]
    time: "object"
    matrix: np.ndarray


def controllability_generators(sys: SystemSpec, lam: DelayVector, T,
                               strict: bool = False,
                               table: XiTable | None = None,
                               entries: list[ClassEntry] | None = None
                               ) -> list[GeneratorBlock]:
    """One d x m block per class with time <= T (or < T), in time order."""
    if sys.N != lam.N:
        raise DimensionMismatch("system and delay vector disagree on N")
    table = table if table is not None else XiTable(sys)
    if entries is None:
        entries = lam.enumerate_classes(T, strict=strict)
    blocks = []
    for entry in entries:
        mat = xi_hat(sys, lam, entry.key, table=table) @ sys.B
        blocks.append(GeneratorBlock(entry.key, entry.time, mat))
    return blocks
