"""Shared builders for the test suite: reference systems and random instances."""

import math
import random
from fractions import Fraction

import numpy as np

from delayctrl import (
    EXACT,
    NUMERIC,
    DelayBasis,
    RankBackend,
    SignalFunction,
    SystemSpec,
    make_delay_vector,
    rank_of_span,
)

SQRT2 = math.sqrt(2)


def triple_shift_system(mode=NUMERIC) -> SystemSpec:
    """d=3 reference system: A2 the upper shift, A1 = -A2^2, B = e3."""
    a2 = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    a1 = [[0, 0, -1], [0, 0, 0], [0, 0, 0]]
    b = [[0], [0], [1]]
    return SystemSpec.create([a1, a2], b, scalar_mode=mode)


def half_delays():
    """Delays (1, 1/2): rationally dependent, collapses to a 1/2 basis."""
    return make_delay_vector(DelayBasis.of(1, Fraction(1, 2)), [[1, 0], [0, 1]])


def sqrt2_delays():
    """Delays (1, sqrt 2), declared rationally independent."""
    return make_delay_vector(DelayBasis.of(1.0, SQRT2), [[1, 0], [0, 1]])


def span_defect_system():
    """d=4 reference system whose generators span only {0} x C^3."""
    s2, s3 = math.sqrt(2), math.sqrt(3)
    a1 = [[0, 1, 0, 0], [2, 0, 0, 0], [0, 0, 0, 1], [-3, s2, 0, 0]]
    a2 = [[0.5, 0, -1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [s3, 0, 0, 2]]
    b = [[0], [0], [0], [1]]
    sys = SystemSpec.create([a1, a2], b)
    # any second delay in (3/4, 1), declared independent of 1
    lam = make_delay_vector(DelayBasis.of(1.0, math.sqrt(3) / 2),
                            [[1, 0], [0, 1]])
    return sys, lam


def random_matrix(rng: random.Random, rows, cols, mode, lo=-2, hi=2):
    data = [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
    return data


def random_system(rng: random.Random, d, m, n_delays, mode) -> SystemSpec:
    a_list = [random_matrix(rng, d, d, mode) for _ in range(n_delays)]
    b = random_matrix(rng, d, m, mode)
    return SystemSpec.create(a_list, b, scalar_mode=mode)


def kalman_controllable_pair(rng: random.Random, d, m=1, mode=EXACT):
    """Rejection-sample raw (A, B) data until the classical Kalman test passes."""
    while True:
        a_raw = random_matrix(rng, d, d, mode)
        b_raw = random_matrix(rng, d, m, mode)
        sys = SystemSpec.create([a_raw], b_raw, scalar_mode=mode)
        blocks, cur = [], sys.B
        for _ in range(d):
            blocks.append(cur)
            cur = sys.A[0] @ cur
        backend = RankBackend.exact() if mode == EXACT else RankBackend.numeric()
        if rank_of_span(blocks, backend, rows=d) == d:
            return a_raw, b_raw


def diblik_system(rng: random.Random, d, k):
    """x(t) = x(t-1) + A x(t-k) + B u(t) with (A, B) Kalman controllable."""
    a_raw, b_raw = kalman_controllable_pair(rng, d)
    ident = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    sys = SystemSpec.create([ident, a_raw], b_raw, scalar_mode=EXACT)
    lam = make_delay_vector(DelayBasis.of(1), [[1], [k]])
    return sys, lam


def random_commensurable_delays(rng: random.Random, n_delays, kmax=3):
    den = rng.randint(1, 3)
    rows = [[rng.randint(1, kmax)] for _ in range(n_delays)]
    return make_delay_vector(DelayBasis.of(Fraction(1, den)), rows)


_IRRATIONALS = [math.sqrt(2), math.sqrt(3), math.sqrt(5) / 2, math.pi / 3,
                math.e / 2, math.sqrt(7) / 2]


def random_independent_delays(rng: random.Random, n_delays, h=None):
    """Delays over an irrational basis with ratio at most ~2 between values."""
    if h is None:
        h = rng.randint(1, min(2, n_delays))
    if h == 1:
        return random_commensurable_delays(rng, n_delays)
    vals = [1.0, rng.choice(_IRRATIONALS)]
    while True:
        rows = [[rng.randint(0, 1) for _ in range(h)] for _ in range(n_delays)]
        if any(all(x == 0 for x in row) for row in rows):
            continue
        if len({tuple(r) for r in rows}) < h:
            continue
        mat = np.array(rows, dtype=float)
        if np.linalg.matrix_rank(mat) == h:
            return make_delay_vector(DelayBasis.of(*vals), rows)


def random_delays(rng: random.Random, n_delays):
    if rng.random() < 0.5:
        return random_commensurable_delays(rng, n_delays)
    return random_independent_delays(rng, n_delays)


def random_piecewise_signal(rng: random.Random, dim, domain, mode, degree=2,
                            segments=2):
    """Random piecewise polynomial with the requested number of segments."""
    a, b = domain
    if mode == EXACT:
        a, b = Fraction(a), Fraction(b)
        cuts = sorted(Fraction(rng.randint(1, 9), 10) for _ in range(segments - 1))
        breaks = [a] + [a + c * (b - a) for c in cuts] + [b]
        coeffs = [[[Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                    for _ in range(degree + 1)] for _ in range(dim)]
                  for _ in range(segments)]
    else:
        cuts = sorted(rng.uniform(0.1, 0.9) for _ in range(segments - 1))
        breaks = [a] + [a + c * (b - a) for c in cuts] + [b]
        coeffs = [[[rng.uniform(-2, 2) + 1j * rng.uniform(-1, 1)
                    for _ in range(degree + 1)] for _ in range(dim)]
                  for _ in range(segments)]
    return SignalFunction.piecewise(breaks, coeffs, mode=mode)
