"""Delay vectors: class structure, comparisons, approximations."""

import math
import random
import warnings
from fractions import Fraction

import pytest

from delayctrl import (
    AmbiguousBoundary,
    DelayBasis,
    RankDeficientBasis,
    SurrogateSearchExceeded,
    ZeroDelay,
    commensurable_approx,
    commensurable_surrogate,
    epsilon0,
    make_delay_vector,
    preorder_leq,
)
from helpers import half_delays, random_independent_delays, sqrt2_delays


def test_basis_validation():
    with pytest.raises(Exception):
        DelayBasis.of(-1)
    with pytest.raises(Exception):
        DelayBasis.of(0.0)
    with pytest.raises(ZeroDelay):
        make_delay_vector(DelayBasis.of(1.0, math.sqrt(2)), [[1, 0], [0, 0]])
    with pytest.raises(RankDeficientBasis):
        make_delay_vector(DelayBasis.of(1.0, math.sqrt(2)), [[1, 0], [2, 0]])


def test_rational_basis_collapses():
    lam = half_delays()
    assert lam.h == 1
    assert lam.basis.exact == (Fraction(1, 2),)
    assert lam.M == ((2,), (1,))
    assert lam.delays == (1.0, 0.5)


def test_collapse_is_canonical_gcd():
    lam = make_delay_vector(DelayBasis.of(Fraction(3, 4), Fraction(1, 2)),
                            [[1, 0], [0, 1]])
    assert lam.basis.exact == (Fraction(1, 4),)
    assert lam.M == ((3,), (2,))


def test_class_key_and_members():
    lam = half_delays()
    # delays (1, 1/2): (1,0) and (0,2) share the class at time 1
    assert lam.class_key((1, 0)) == lam.class_key((0, 2)) == (2,)
    members = lam.class_members((2,))
    assert set(members) == {(1, 0), (0, 2)}
    lam_i = sqrt2_delays()
    assert lam_i.class_key((1, 0)) != lam_i.class_key((0, 1))
    assert lam_i.class_members(lam_i.class_key((2, 1))) == [(2, 1)]


def test_lattice_points_and_classes():
    lam = half_delays()
    pts = lam.lattice_points_upto(1)
    assert set(pts) == {(0, 0), (0, 1), (0, 2), (1, 0)}
    entries = lam.enumerate_classes(1)
    assert [e.key for e in entries] == [(0,), (1,), (2,)]
    assert [e.time.exact for e in entries] == [0, Fraction(1, 2), 1]
    strict = lam.enumerate_classes(1, strict=True)
    assert [e.key for e in strict] == [(0,), (1,)]


def test_enumerate_classes_sorted_for_irrational_basis():
    lam = sqrt2_delays()
    entries = lam.enumerate_classes(5.0)
    times = [e.time.numeric for e in entries]
    assert times == sorted(times)
    # all classes are singletons under a truly independent declaration
    for e in entries:
        assert lam.class_members(e.key) == [e.representative]


def test_boundary_warning_on_numeric_tie():
    lam = sqrt2_delays()
    t = math.sqrt(2) + 1e-12
    with pytest.warns(AmbiguousBoundary):
        lam.enumerate_classes(t)


def test_exact_basis_has_no_boundary_warning():
    lam = half_delays()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lam.enumerate_classes(Fraction(3, 2))


def test_preorder():
    lam = sqrt2_delays()
    dep = half_delays()
    assert preorder_leq(lam, dep)
    assert not preorder_leq(dep, lam)
    assert preorder_leq(lam, lam)
    assert preorder_leq(dep, dep)


def test_commensurable_approx():
    lam = sqrt2_delays()
    approx = commensurable_approx(lam, 10)
    assert approx.h == 1
    assert approx.basis.exact == (Fraction(1, 10),)
    assert approx.delays == pytest.approx((1.0, 1.4))
    assert approx.delays_exact == (1, Fraction(7, 5))
    for orig, appr in zip(lam.delays, approx.delays):
        assert appr <= orig < appr + 1.0 / 10 + 1e-12


def test_surrogate_preserves_class_pattern():
    lam = sqrt2_delays()
    surro = commensurable_surrogate(lam, 2.0, 0.05)
    assert surro.h == 1
    for orig, appr in zip(lam.delays, surro.delays):
        assert orig < 1.05 * appr
    # all original classes below T stay distinct under the surrogate
    keys = {}
    for p in lam.lattice_points_upto(2.0):
        keys.setdefault(lam.class_key(p), []).append(p)
    for key, pts in keys.items():
        vals = {surro.time_of(p).exact for p in pts}
        assert len(vals) == 1
    seen = {}
    for key, pts in keys.items():
        val = surro.time_of(pts[0]).exact
        assert val not in seen, f"classes {key} and {seen[val]} merged"
        seen[val] = key


def test_surrogate_gives_up():
    lam = sqrt2_delays()
    with pytest.raises(SurrogateSearchExceeded):
        commensurable_surrogate(lam, 2.0, 1e-9, max_n=50)


def test_epsilon0_separates_class_times():
    lam = sqrt2_delays()
    eps = epsilon0(lam, 2.0)
    times = sorted({e.time.numeric for e in lam.enumerate_classes(2.0)})
    gaps = [b - a for a, b in zip(times, times[1:])]
    assert eps <= min(gaps) + 1e-12
    # no class time inside (T, T + eps)
    later = [e.time.numeric for e in lam.enumerate_classes(2.0 + 2.0)
             if e.time.numeric > 2.0 + 1e-9]
    assert min(later) >= 2.0 + eps - 1e-12


def test_epsilon0_random_independent():
    rng = random.Random(11)
    for _ in range(10):
        lam = random_independent_delays(rng, 2, h=2)
        t = rng.uniform(1.0, 3.0)
        eps = epsilon0(lam, t)
        assert eps > 0
        times = sorted({e.time.numeric for e in lam.enumerate_classes(t)})
        for a, b in zip(times, times[1:]):
            assert b - a >= eps - 1e-12
