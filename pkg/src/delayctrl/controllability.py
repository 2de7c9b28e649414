"""Relative controllability tests, minimal time, and delay comparisons."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .coefficients import (
    GeneratorBlock,
    SystemSpec,
    XiTable,
    controllability_generators,
    xi_hat,
)
from .delays import DelayVector, TimeStamp, preorder_leq
from .errors import (
    DimensionMismatch,
    MixedScalarMode,
    NotCommensurable,
    NotComparable,
    TheoremViolation,
)
from .scalars import EXACT, NUMERIC

_TOL_ENV = "RELDIFF_RANK_TOL"


@dataclass(frozen=True)
class RankBackend:
    """Rank computation strategy: exact elimination or numeric SVD threshold."""

    mode: str = NUMERIC
    numeric_tolerance: float | None = None

    def __post_init__(self):
        if self.mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown rank mode {self.mode!r}")
        if self.numeric_tolerance is not None and not (0 < self.numeric_tolerance < 1):
            raise ValueError("numeric tolerance must lie in (0, 1)")

    @classmethod
    def exact(cls) -> "RankBackend":
        return cls(mode=EXACT)

    @classmethod
    def numeric(cls, tolerance: float | None = None) -> "RankBackend":
        if tolerance is None:
            env = os.environ.get(_TOL_ENV)
            tolerance = float(env) if env else None
        return cls(mode=NUMERIC, numeric_tolerance=tolerance)

    @classmethod
    def for_system(cls, sys: SystemSpec) -> "RankBackend":
        return cls.exact() if sys.is_exact else cls.numeric()


@dataclass(frozen=True)
class ControllabilityReport:
    controllable: bool
    rank_achieved: int
    generators_used: int
    horizon: tuple[TimeStamp, ...]
    certificate: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "controllable": self.controllable,
            "rank_achieved": self.rank_achieved,
            "generators_used": self.generators_used,
            "contributing_times": [
                {"coeffs": list(t.coeffs), "numeric": t.numeric,
                 "exact": str(t.exact) if t.exact is not None else None}
                for t in self.horizon],
            "certificate_columns": list(self.certificate)
            if self.certificate is not None else None,
        }


def rank_of_span(blocks, backend: RankBackend, rows: int | None = None) -> int:
    """Rank of the horizontally stacked block matrices."""
    blocks = [b.matrix if isinstance(b, GeneratorBlock) else b for b in blocks]
    if rows is None:
        if not blocks:
            return 0
        rows = blocks[0].shape[0]
    stacked = _stack_for_backend(blocks, rows, backend)
    return linalg.rank(stacked, backend.mode, backend.numeric_tolerance)


def _stack_for_backend(blocks, rows: int, backend: RankBackend) -> np.ndarray:
    stacked = linalg.hstack(blocks, rows, backend.mode)
    if backend.mode == EXACT and not linalg.is_exact_matrix(stacked):
        raise MixedScalarMode("exact backend requires exact matrices")
    if backend.mode == NUMERIC and linalg.is_exact_matrix(stacked):
        stacked = linalg.to_numeric(stacked)
    return stacked


def _report_from_blocks(blocks: list[GeneratorBlock], d: int, m: int,
                        backend: RankBackend) -> ControllabilityReport:
    stacked = _stack_for_backend([b.matrix for b in blocks], d, backend)
    rank, pivots = linalg.rank_and_pivots(stacked, backend.mode,
                                          backend.numeric_tolerance)
    contributing = sorted({p // m for p in pivots})
    horizon = tuple(blocks[i].time for i in contributing)
    return ControllabilityReport(
        controllable=rank == d,
        rank_achieved=rank,
        generators_used=len(blocks),
        horizon=horizon,
        certificate=tuple(pivots) if rank == d else None,
    )


def is_relatively_controllable(sys: SystemSpec, lam: DelayVector, T,
                               backend: RankBackend | None = None,
                               table: XiTable | None = None
                               ) -> ControllabilityReport:
    """Span test over all classes with time <= T."""
    backend = backend or RankBackend.for_system(sys)
    blocks = controllability_generators(sys, lam, T, strict=False, table=table)
    return _report_from_blocks(blocks, sys.d, sys.m, backend)


def ck_rank_condition(sys: SystemSpec, lam: DelayVector, T,
                      backend: RankBackend | None = None,
                      table: XiTable | None = None) -> ControllabilityReport:
    """Strict-inequality variant: classes with time < T only."""
    if float(T) <= 0:
        raise ValueError("T must be positive")
    backend = backend or RankBackend.for_system(sys)
    blocks = controllability_generators(sys, lam, T, strict=True, table=table)
    return _report_from_blocks(blocks, sys.d, sys.m, backend)


def saturation_bound(sys: SystemSpec, lam: DelayVector) -> TimeStamp:
    """(d - 1) times the largest delay, as an exact time stamp."""
    stamp = lam.lambda_max_stamp()
    coeffs = tuple((sys.d - 1) * c for c in stamp.coeffs)
    return lam.time_of_key(coeffs)


def minimal_controllability_time(sys: SystemSpec, lam: DelayVector,
                                 backend: RankBackend | None = None,
                                 table: XiTable | None = None
                                 ) -> TimeStamp | None:
    """Smallest class time achieving full rank, or None when never reached.

    Class times are scanned up to (d - 1) * Lambda_max; the generator set is
    constant beyond that bound, so rank deficiency there is final.
    """
    backend = backend or RankBackend.for_system(sys)
    table = table if table is not None else XiTable(sys)
    bound = saturation_bound(sys, lam)
    entries = lam.enumerate_classes(bound)
    blocks = controllability_generators(sys, lam, bound, table=table,
                                        entries=entries)
    mats = []
    for block in blocks:
        mats.append(block.matrix)
        stacked = _stack_for_backend(mats, sys.d, backend)
        if linalg.rank(stacked, backend.mode, backend.numeric_tolerance) == sys.d:
            return block.time
    return None


def controllable_some_time(sys: SystemSpec, lam: DelayVector,
                           backend: RankBackend | None = None,
                           table: XiTable | None = None) -> ControllabilityReport:
    """Verdict at the saturation time (d - 1) * Lambda_max."""
    return is_relatively_controllable(sys, lam, saturation_bound(sys, lam),
                                      backend, table)


@dataclass(frozen=True)
class AugmentedSystem:
    """Single-delay companion-block rewrite of a commensurable-delay system."""

    A_hat: np.ndarray
    B_hat: np.ndarray
    C_hat: np.ndarray
    lam: object  # Fraction or float
    K: int


def augmented_system(sys: SystemSpec, lam: DelayVector) -> AugmentedSystem:
    """Build the K*d-dimensional single-delay system for commensurable delays."""
    if not lam.is_commensurable:
        raise NotCommensurable("augmented system requires commensurable delays")
    if sys.N != lam.N:
        raise DimensionMismatch("system and delay vector disagree on N")
    k = [row[0] for row in lam.M]
    bigk = max(k)
    d, mode = sys.d, sys.scalar_mode
    a_hat = linalg.zeros(bigk * d, bigk * d, mode)
    for idx, kj in enumerate(k):
        blk = (kj - 1) * d
        a_hat[0:d, blk:blk + d] = a_hat[0:d, blk:blk + d] + sys.A[idx]
    ident = linalg.eye(d, mode)
    for r in range(1, bigk):
        a_hat[r * d:(r + 1) * d, (r - 1) * d:r * d] = ident
    b_hat = linalg.zeros(bigk * d, sys.m, mode)
    b_hat[0:d, :] = sys.B
    c_hat = linalg.zeros(d, bigk * d, mode)
    c_hat[:, 0:d] = ident
    lam_val = lam.basis.exact[0] if lam.basis.exact[0] is not None \
        else lam.basis.values[0]
    return AugmentedSystem(a_hat, b_hat, c_hat, lam_val, bigk)


def kalman_augmented_check(sys: SystemSpec, lam: DelayVector, T,
                           backend: RankBackend | None = None) -> bool:
    """Output-Kalman rank test on the augmented single-delay system."""
    backend = backend or RankBackend.for_system(sys)
    aug = augmented_system(sys, lam)
    if isinstance(aug.lam, Fraction):
        steps = int(Fraction(T) / aug.lam)
    else:
        steps = math.floor(float(T) / aug.lam + 1e-12)
    blocks = []
    cur = aug.B_hat
    for _ in range(steps + 1):
        blocks.append(aug.C_hat @ cur)
        cur = aug.A_hat @ cur
    return rank_of_span(blocks, backend, rows=sys.d) == sys.d


@dataclass(frozen=True)
class TransferResult:
    kappa: object  # Fraction or float
    surrogate_report: ControllabilityReport
    report: ControllabilityReport


def transfer_controllability(sys: SystemSpec, lam: DelayVector, other: DelayVector,
                             T, backend: RankBackend | None = None
                             ) -> TransferResult:
    """Apply the delay-comparison theorem: controllability with the more
    rationally dependent delays L in time T forces controllability with
    Lambda in time kappa*T, kappa = max Lambda_j / L_j.

    A counterexample can only come from a bug or a false independence
    declaration, and raises TheoremViolation.
    """
    if not preorder_leq(lam, other):
        raise NotComparable("delay vectors are not ordered by the preorder")
    exact = all(e is not None for e in lam.delays_exact) and \
        all(e is not None for e in other.delays_exact)
    if exact:
        kappa = max(a / b for a, b in zip(lam.delays_exact, other.delays_exact))
        kt = kappa * Fraction(T)
    else:
        kappa = max(a / b for a, b in zip(lam.delays, other.delays))
        kt = kappa * float(T)
    surrogate_report = is_relatively_controllable(sys, other, T, backend)
    report = is_relatively_controllable(sys, lam, kt, backend)
    if surrogate_report.controllable and not report.controllable:
        raise TheoremViolation(
            "controllable with L in time T but not with Lambda in time kappa*T; "
            "check the independence declaration of the basis")
    return TransferResult(kappa, surrogate_report, report)


def reduced_generator_check(sys: SystemSpec, lam: DelayVector, other: DelayVector,
                            backend: RankBackend | None = None,
                            table: XiTable | None = None) -> bool:
    """Controllability-in-some-time test over the reduced generator set
    indexed by L . n <= (d - 1) L_max, valid whenever Lambda <= L in the
    rational-dependence preorder."""
    if not preorder_leq(lam, other):
        raise NotComparable("delay vectors are not ordered by the preorder")
    backend = backend or RankBackend.for_system(sys)
    table = table if table is not None else XiTable(sys)
    bound = saturation_bound(sys, other)
    seen = set()
    blocks = []
    for p in other.lattice_points_upto(bound):
        key = lam.class_key(p)
        if key in seen:
            continue
        seen.add(key)
        blocks.append(xi_hat(sys, lam, key, table=table) @ sys.B)
    return rank_of_span(blocks, backend, rows=sys.d) == sys.d
