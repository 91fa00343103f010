import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moorefilter.automata import ClockConstraint
from moorefilter.dbm import (
    INF,
    Bound,
    Dbm,
    Interval,
    canonicalize,
    dbm_equal,
    intersect_guard,
    is_empty,
    normalize_k,
    position_key,
    project,
    project_to_y,
    reset,
    reset_and_elapse,
    up,
)

CLOCKS = ("x", "#y")
GRID = [Fraction(k, 4) for k in range(0, 25)]


def points(clocks=CLOCKS, grid=GRID):
    for vals in itertools.product(grid, repeat=len(clocks)):
        yield dict(zip(clocks, vals))


def members(z):
    return {tuple(v.values()) for v in points(z.clocks) if z.contains(v)}


# random zones from a handful of difference constraints
constraint = st.tuples(
    st.sampled_from([None, "x", "#y"]),
    st.sampled_from([None, "x", "#y"]),
    st.integers(-4, 4),
    st.booleans(),
).filter(lambda c: c[0] != c[1])
zones = st.lists(constraint, max_size=4).map(lambda cs: Dbm.from_constraints(CLOCKS, cs))

guards = st.lists(
    st.tuples(st.sampled_from(["x", "#y"]), st.sampled_from(["<", "<=", ">", ">="]), st.integers(0, 4)), max_size=2
).map(lambda atoms: ClockConstraint.of(*atoms))


def test_bound_order_and_render():
    assert Bound(2, True) < Bound(2, False) < Bound(3, True)
    assert Bound(math.inf, False).strict
    assert str(Bound(3, True)) == "<3" and str(Bound(3, False)) == "<=3"
    assert Bound.from_raw(Bound(-2, True).raw) == Bound(-2, True)


def test_canonical_examples():
    zero = Dbm.zero(CLOCKS)
    assert canonicalize(zero) == zero
    contradictory = Dbm.from_constraints(
        CLOCKS, [("x", None, 2, False), ("#y", "x", 1, False), (None, "#y", -5, False)]
    )
    assert is_empty(contradictory)
    z = Dbm.from_constraints(("x",), [("x", None, 3, True)])
    assert z.bound(None, "x") == Bound(0, False)
    assert z.bound("x", None) == Bound(3, True)
    assert not is_empty(Dbm.universe(CLOCKS))


@settings(max_examples=80, deadline=None)
@given(zones)
def test_canonicalize_idempotent(z):
    assert canonicalize(z) == z
    assert canonicalize(canonicalize(z)) == canonicalize(z)


def test_intersect_examples():
    z = up(Dbm.zero(CLOCKS))
    g = ClockConstraint.of(("x", "<", 2))
    zg = intersect_guard(z, g)
    assert members(zg) == {p for p in members(z) if p[0] < 2}
    empty = Dbm.empty(CLOCKS)
    assert is_empty(intersect_guard(empty, g))
    assert intersect_guard(z, ClockConstraint()) == z


@settings(max_examples=80, deadline=None)
@given(zones, guards)
def test_intersect_membership_agreement(z, g):
    zg = intersect_guard(z, g)
    for v in points(grid=GRID[::2]):
        assert zg.contains(v) == (z.contains(v) and g.holds(v))


def test_projection_examples():
    z = Dbm.from_constraints(CLOCKS, [("x", "#y", 0, False), ("#y", "x", 0, False), ("x", None, 2, True)])
    assert project_to_y(z) == Interval.make(0, 2)
    assert str(project_to_y(z)) == "[0,2)"
    assert project_to_y(Dbm.universe(CLOCKS)) == Interval.make(0)
    assert str(project_to_y(Dbm.zero(CLOCKS))) == "[0,0]"
    with pytest.raises(ValueError):
        project_to_y(Dbm.empty(CLOCKS))


@settings(max_examples=80, deadline=None)
@given(zones, guards)
def test_projection_exact_and_monotone(z, g):
    if is_empty(z):
        return
    iv = project(z, "x")
    # open witness ranges have quarter-grid endpoints, so an eighth grid always hits them
    witnesses = [Fraction(k, 8) for k in range(0, 65)]
    for u in GRID[:13]:
        feasible = any(z.contains({"x": u, "#y": y}) for y in witnesses)
        assert iv.contains(u) == feasible
    zg = intersect_guard(z, g)
    if not is_empty(zg):
        assert project_to_y(zg).issubset(project_to_y(z))


def test_reset_and_elapse_examples():
    z = Dbm.from_constraints(CLOCKS, [("x", None, 3, False), (None, "x", -3, False), ("#y", None, 3, False), (None, "#y", -3, False)])
    diag = Dbm.from_constraints(CLOCKS, [("x", "#y", 0, False), ("#y", "x", 0, False)])
    assert dbm_equal(reset_and_elapse(z, {"x", "#y"}), diag)
    assert is_empty(reset_and_elapse(Dbm.empty(CLOCKS), {"x"}))
    z = Dbm.from_constraints(CLOCKS, [("x", None, 1, False), (None, "x", -1, False), ("#y", None, 0, False)])
    got = reset_and_elapse(z, {"#y"})
    want = Dbm.from_constraints(CLOCKS, [("x", "#y", 1, False), ("#y", "x", -1, False)])
    assert dbm_equal(got, want)


@settings(max_examples=60, deadline=None)
@given(zones, st.sets(st.sampled_from(CLOCKS)))
def test_reset_and_elapse_semantics(z, resets):
    got = reset_and_elapse(z, resets)
    # image of members (on a coarse grid) must be inside, and closed under delay
    for v in points(grid=GRID[:9]):
        if z.contains(v):
            r = {c: (0 if c in resets else val) for c, val in v.items()}
            for t in (Fraction(0), Fraction(1, 4), Fraction(7, 2)):
                assert got.contains({c: val + t for c, val in r.items()})
    for v in points(grid=GRID[:13]):
        if got.contains(v):
            assert got.contains({c: val + 1 for c, val in v.items()})


def test_normalize_examples():
    z = Dbm.from_constraints(("x",), [(None, "x", -100, False)])
    got = normalize_k(z, {"x": 2})
    assert got == Dbm.from_constraints(("x",), [(None, "x", -2, True)])
    inside = Dbm.from_constraints(("x",), [("x", None, 1, False)])
    assert normalize_k(inside, {"x": 2}) == inside
    assert is_empty(normalize_k(Dbm.empty(("x",)), {"x": 2}))


@settings(max_examples=80, deadline=None)
@given(zones, st.integers(0, 3), st.integers(0, 3))
def test_normalize_never_shrinks(z, kx, ky):
    n = normalize_k(z, {"x": kx, "#y": ky})
    for v in points(grid=GRID[::2]):
        if z.contains(v):
            assert n.contains(v)


def test_dbm_equal():
    z = up(Dbm.zero(CLOCKS))
    assert dbm_equal(z, z)
    a = Dbm.from_constraints(CLOCKS, [("x", "#y", 0, False), ("#y", "x", 0, False)])
    raw = Dbm(CLOCKS, ((1, 1, 1), (INF, 1, 1), (INF, 1, 1)))
    assert dbm_equal(a, raw)
    assert not dbm_equal(Dbm.from_constraints(("x",), [("x", None, 1, True)]), Dbm.from_constraints(("x",), [("x", None, 1, False)]))
    with pytest.raises(ValueError):
        dbm_equal(Dbm.zero(("x",)), Dbm.zero(("z",)))


def test_reset_then_up_is_reset_and_elapse():
    z = Dbm.from_constraints(CLOCKS, [("x", None, 3, True)])
    assert reset_and_elapse(z, {"x"}) == canonicalize(up(reset(z, {"x"})))


@given(st.integers(0, 40), st.integers(0, 40), st.booleans(), st.booleans(), st.integers(0, 44))
def test_interval_cuts_agree_with_contains(lo, width, lo_strict, hi_strict, u4):
    iv = Interval.make(lo, lo + width, lo_strict, hi_strict)
    u = u4 / 4
    lo_cut, hi_cut = iv.cuts()
    assert iv.contains(u) == (lo_cut <= position_key(u) < hi_cut)
    assert Interval.from_cuts(lo_cut, hi_cut) == iv or iv.is_empty()
