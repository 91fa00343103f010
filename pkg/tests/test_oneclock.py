import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from moorefilter.automata import Alphabet, ClockConstraint, TaTransition, TimedAutomaton, TimedWord, ta_accepts
from moorefilter.dbm import Dbm, Interval
from moorefilter.oneclock import (
    Rta,
    RtaTransition,
    check_simulation,
    determinize_rta,
    elementary_intervals,
    one_clock_determinize,
    ta_to_rta,
)
from moorefilter.oracles import sample_accepted_word
from moorefilter.patterns import gear

from conftest import tas, timed_words


def _edges(rta):
    return {(rta.states[t.source][0], t.label, str(t.guard), rta.states[t.target][0]) for t in rta.transitions}


def test_gear_rta():
    rta = ta_to_rta(gear())
    assert _edges(rta) == {("?", "g1", "[0,inf)", "g1"), ("g1", "g2", "[0,2)", "g2")}
    det = one_clock_determinize(gear())
    assert det.num_states == 3
    assert det.accepts(TimedWord((("g1", 1.0), ("g2", 2.5))))
    assert not det.accepts(TimedWord((("g1", 1.0), ("g2", 3.0))))


def test_clockless_ta_has_unguarded_rta():
    sigma = Alphabet(("a", "b"))
    ta = TimedAutomaton(
        sigma, ("p", "q"), "p", {"q"}, (),
        (TaTransition("p", "q", "a"), TaTransition("q", "p", "b"), TaTransition("q", "q", "a")),
    )
    rta = ta_to_rta(ta)
    assert {str(t.guard) for t in rta.transitions} == {"[0,inf)"}
    det = one_clock_determinize(ta)
    w = TimedWord((("a", 0.5), ("b", 7.0), ("a", 7.25)))
    assert det.accepts(w) and ta_accepts(ta, w)


def _hand_rta():
    dummy = Dbm.zero(("#y",))
    return Rta(
        Alphabet(("a",)),
        (("s", dummy), ("t1", dummy), ("t2", dummy)),
        frozenset({1}),
        (RtaTransition(0, "a", Interval.make(0, 2), 1), RtaTransition(0, "a", Interval.make(1, 3), 2)),
    )


def test_elementary_pieces():
    pieces = elementary_intervals([Interval.make(0, 2), Interval.make(1, 3)])
    assert [str(Interval.from_cuts(*p)) for p in pieces] == ["[0,1)", "[1,2)", "[2,3)", "[3,inf)"]
    det = determinize_rta(_hand_rta())
    want = {"[0,1)": {1}, "[1,2)": {1, 2}, "[2,3)": {2}}
    got = {str(iv): set(det.states[t]) for q, a, iv, t in det.transitions() if q == 0}
    assert got == want
    assert det.step(0, "a", 3.0) is None
    assert det.step(0, "a", 1.0) == det.step(0, "a", 1.5)
    assert det.step(0, "a", 0.999) != det.step(0, "a", 1.0)


def test_elementary_pieces_with_points():
    pieces = elementary_intervals([Interval.make(1, 1, False, False), Interval.make(0, 2, True, False)])
    assert [str(Interval.from_cuts(*p)) for p in pieces] == ["[0,0]", "(0,1)", "[1,1]", "(1,2]", "(2,inf)"]


def _sample_points(iv):
    lo = iv.lower.value
    hi = iv.upper.value if iv.upper.value != math.inf else lo + 5
    pts = [lo + (hi - lo) * f for f in (0.25, 0.5, 0.75)]
    if not iv.lower.strict:
        pts.append(lo)
    if not iv.upper.strict:
        pts.append(hi)
    return [u for u in pts if iv.contains(u)]


@settings(max_examples=40, deadline=None)
@given(tas())
def test_determinism_and_guard_homogeneity(ta):
    det = one_clock_determinize(ta)
    seen = {}
    for q, a, iv, t in det.transitions():
        pts = _sample_points(iv)
        assert pts
        for u in pts:
            # one successor per (state, label, dwell)
            assert seen.setdefault((q, a, u), t) == t
            want = {dst for r in det.states[q] for g, dst in det.rta.outgoing.get((r, a), ()) if g.contains(u)}
            assert set(det.states[t]) == want


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_simulation_on_random_words(data):
    ta = data.draw(tas())
    det = one_clock_determinize(ta)
    w = data.draw(timed_words(ta.alphabet.symbols, max_len=6))
    assert check_simulation(ta, det, w)
    # the RTA over-approximates as well
    assert not ta_accepts(ta, w) or det.rta.accepts(w)


@settings(max_examples=40, deadline=None)
@given(tas(), st.integers(0, 2**16))
def test_simulation_on_accepted_samples(ta, seed):
    rng = random.Random(seed)
    det = one_clock_determinize(ta)
    for _ in range(5):
        w = sample_accepted_word(ta, rng)
        if w is not None:
            assert det.accepts(w)


def test_check_simulation_gear():
    g = gear()
    assert check_simulation(g, one_clock_determinize(g), TimedWord((("g1", 1.0), ("g2", 2.5))))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_lazy_matches_eager(data):
    ta = data.draw(tas())
    rta = ta_to_rta(ta)
    eager = determinize_rta(rta)
    lazy = determinize_rta(rta, lazy=True)
    assert lazy.num_states == 1
    for _ in range(3):
        w = data.draw(timed_words(ta.alphabet.symbols, max_len=6))
        qe, ql = eager.run(w), lazy.run(w)
        assert (qe is None) == (ql is None)
        if qe is not None:
            assert eager.states[qe] == lazy.states[ql]
    assert lazy.num_states <= eager.num_states


def test_guard_on_never_reset_clock():
    # x is never reset, so on the first edge it equals the dwell time
    ta = TimedAutomaton(
        Alphabet(("a",)), ("p", "q"), "p", {"q"}, ("x",),
        (TaTransition("p", "q", "a", frozenset(), ClockConstraint.of(("x", ">", 1))),),
    )
    det = one_clock_determinize(ta)
    assert det.accepts(TimedWord((("a", 1.5),)))
    assert not det.accepts(TimedWord((("a", 1.0),)))
