"""Built-in pattern automata: small untimed examples and automotive-style timed patterns."""

from __future__ import annotations

from .automata import Alphabet, ClockConstraint, Nfa, TaTransition, TimedAutomaton


def pattern_aab() -> Nfa:
    """``a a* b``: a run of ``a``'s closed by a single ``b``."""
    return Nfa(
        Alphabet(("a", "b")),
        ("s0", "s1", "s2"),
        "s0",
        {"s2"},
        {("s0", "a", "s1"), ("s1", "a", "s1"), ("s1", "b", "s2")},
    )


def _c(*atoms):
    return ClockConstraint.of(*atoms)


def gear() -> TimedAutomaton:
    """Gear shift from 1st to 2nd in less than 2 time units."""
    return TimedAutomaton(
        Alphabet(("g1", "g2")),
        ("?", "g1", "g2"),
        "?",
        {"g2"},
        ("x",),
        (
            TaTransition("?", "g1", "g1", {"x"}),
            TaTransition("g1", "g2", "g2", guard=_c(("x", "<", 2))),
        ),
    )


def within_two() -> TimedAutomaton:
    """``b`` occurs within two time units after ``a``."""
    return TimedAutomaton(
        Alphabet(("a", "b")),
        ("s0", "s1", "s2"),
        "s0",
        {"s2"},
        ("x",),
        (
            TaTransition("s0", "s1", "a", {"x"}),
            TaTransition("s1", "s2", "b", guard=_c(("x", "<", 2))),
        ),
    )


def torque() -> TimedAutomaton:
    """Four or more consecutive ``high`` events within one time unit after a ``low``."""
    inside = _c(("x", ">", 0), ("x", "<", 1))
    trans = [TaTransition("s0", "s1", "low", {"x"})]
    for k in range(1, 5):
        trans.append(TaTransition(f"s{k}", f"s{k + 1}", "high", guard=inside))
    trans.append(TaTransition("s5", "s5", "high"))
    trans.append(TaTransition("s5", "s6", "high", guard=_c(("x", ">", 1))))
    return TimedAutomaton(
        Alphabet(("low", "high")),
        tuple(f"s{k}" for k in range(7)),
        "s0",
        {"s6"},
        ("x",),
        tuple(trans),
    )


def accel() -> TimedAutomaton:
    """Gears 1 to 4 with high RPM on the way, then more than one time unit without other events of interest.

    Labels: ``g1`` .. ``g4`` gear changes, ``rpm_hi`` (RPM at least 2500) and
    ``rpm_lo`` (below 2500).
    """
    gears = ("g1", "g2", "g3", "g4")
    after = ("rpm_lo", "rpm_hi", "g3", "g4")
    states = ("?", "g1", "g2", "g3", "g4", "?'", "g1'", "g2'", "g3'", "g4'", "f0", "ok")
    t = [TaTransition("?", "?'", "rpm_hi")]
    top = ("?", "g1", "g2", "g3", "g4")
    bottom = ("?'", "g1'", "g2'", "g3'", "g4'")
    for k, g in enumerate(gears):
        t.append(TaTransition(top[k], top[k + 1], g))
        if k < 3:
            t.append(TaTransition(bottom[k], bottom[k + 1], g))
        else:
            t.append(TaTransition(bottom[k], bottom[k + 1], g, {"x"}, _c(("x", "<", 10))))
    for k in range(1, 4):
        t.append(TaTransition(top[k], bottom[k], "rpm_hi"))
    t.append(TaTransition("g4", "g4'", "rpm_hi", {"x"}, _c(("x", "<", 10))))
    for a in after:
        t.append(TaTransition("g4'", "ok", a, guard=_c(("x", ">", 1))))
        t.append(TaTransition("g4'", "f0", a, {"x"}))
        t.append(TaTransition("f0", "f0", a))
        t.append(TaTransition("f0", "ok", a, guard=_c(("x", ">", 1))))
    return TimedAutomaton(Alphabet(("g1", "g2", "g3", "g4", "rpm_lo", "rpm_hi")), states, "?", {"ok"}, ("x",), tuple(t))


UNTIMED = {"aab": pattern_aab}
TIMED = {"gear": gear, "within-two": within_two, "torque": torque, "accel": accel}
