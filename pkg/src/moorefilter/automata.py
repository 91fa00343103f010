"""Words, NFAs, timed words and timed automata, with their run semantics."""

from __future__ import annotations

import operator
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

BOTTOM = "⊥"
TERMINAL = "$"

State = Hashable
Word = Sequence[str]


class InputError(ValueError):
    """Raised for inputs that violate an operation's precondition."""


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError(f"duplicate labels in alphabet {self.symbols}")
        if BOTTOM in self.symbols:
            raise InputError("the masking symbol cannot be an alphabet label")
        for s in self.symbols:
            if not isinstance(s, str) or not s:
                raise InputError(f"labels must be non-empty strings, got {s!r}")

    @property
    def bottom(self) -> str:
        return BOTTOM

    def with_bottom(self) -> tuple[str, ...]:
        return self.symbols + (BOTTOM,)

    def __contains__(self, label) -> bool:
        return label in self._set

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @cached_property
    def _set(self) -> frozenset[str]:
        return frozenset(self.symbols)

    def check(self, label: str) -> None:
        """Accept labels of the alphabet and the masking symbol."""
        if label != BOTTOM and label not in self._set:
            raise InputError(f"unknown label {label!r}")


# ---------------------------------------------------------------------------
# NFA


@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    states: tuple[State, ...]
    initial: State
    accepting: frozenset[State]
    transitions: frozenset[tuple[State, str, State]]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        known = set(self.states)
        if len(known) != len(self.states):
            raise InputError("duplicate states")
        if self.initial not in known:
            raise InputError(f"initial state {self.initial!r} is not declared")
        if not self.accepting <= known:
            raise InputError(f"undeclared accepting states {set(self.accepting - known)}")
        for src, label, dst in self.transitions:
            if src not in known or dst not in known:
                raise InputError(f"transition {(src, label, dst)} uses an undeclared state")
            if label not in self.alphabet:
                # also rejects the masking symbol and the empty label
                raise InputError(f"transition {(src, label, dst)} has a label outside the alphabet")

    @cached_property
    def index(self) -> dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def successors(self) -> dict[tuple[State, str], tuple[State, ...]]:
        succ = defaultdict(set)
        for src, label, dst in self.transitions:
            succ[src, label].add(dst)
        return {k: tuple(sorted(v, key=self.index.__getitem__)) for k, v in succ.items()}

    def step(self, current: Iterable[State], label: str) -> frozenset[State]:
        succ = self.successors
        out = set()
        for s in current:
            out.update(succ.get((s, label), ()))
        return frozenset(out)

    def accepts(self, w: Word) -> bool:
        return not nfa_run_exists(self, w).isdisjoint(self.accepting)


def nfa_run_exists(nfa: Nfa, w: Word, start: State | None = None) -> frozenset[State]:
    """Set of states reachable from ``start`` (default: the initial state) by reading ``w``."""
    if start is None:
        start = nfa.initial
    elif start not in nfa.index:
        raise InputError(f"unknown state {start!r}")
    current = frozenset([start])
    for label in w:
        nfa.alphabet.check(label)
        current = nfa.step(current, label)
    return current


def is_stuck(nfa: Nfa, w: Word) -> bool:
    return not nfa_run_exists(nfa, w)


# ---------------------------------------------------------------------------
# Timed words


@dataclass(frozen=True)
class TimedWord:
    events: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        events = tuple((label, float(ts)) for label, ts in self.events)
        prev = 0.0
        for k, (_, ts) in enumerate(events):
            if k == 0 and ts <= 0:
                raise InputError(f"timestamps must be positive, got {ts}")
            if k > 0 and ts <= prev:
                raise InputError(f"timestamps must strictly increase ({prev} then {ts} at event {k + 1})")
            prev = ts
        object.__setattr__(self, "events", events)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def __getitem__(self, k):
        return self.events[k]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.events)

    @property
    def timestamps(self) -> tuple[float, ...]:
        return tuple(t for _, t in self.events)

    def shift(self, t: float) -> TimedWord:
        return TimedWord(tuple((a, ts + t) for a, ts in self.events))


def timed_subsequence_shift(w: TimedWord, i: int, j: int) -> TimedWord:
    """Events ``i..j`` (1-based, inclusive) re-rooted so that time 0 is ``tau_{i-1}``."""
    if not 1 <= i <= j <= len(w):
        raise InputError(f"indices ({i}, {j}) out of range for a word of length {len(w)}")
    origin = w.events[i - 2][1] if i > 1 else 0.0
    return TimedWord(tuple((a, ts - origin) for a, ts in w.events[i - 1:j]))


def timed_segment(w: TimedWord, t: float, t_end: float) -> TimedWord:
    """The segment of ``w`` strictly inside ``(t, t_end)``, shifted by ``-t`` and closed by ``$``."""
    if not 0 <= t < t_end:
        raise InputError(f"need 0 <= t < t', got ({t}, {t_end})")
    inside = [(a, ts - t) for a, ts in w.events if t < ts < t_end]
    return TimedWord(tuple(inside) + ((TERMINAL, t_end - t),))


# ---------------------------------------------------------------------------
# Timed automata

_RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass(frozen=True)
class Atom:
    """A single inequality ``clock op const``."""

    clock: str
    op: str
    const: int

    def __post_init__(self):
        if self.op not in _RELATIONS:
            raise InputError(f"unknown relation {self.op!r}")
        if isinstance(self.const, bool) or int(self.const) != self.const or self.const < 0:
            raise InputError(f"guard constants must be non-negative integers, got {self.const!r}")
        object.__setattr__(self, "const", int(self.const))

    def holds(self, value: float) -> bool:
        return _RELATIONS[self.op](value, self.const)

    def __str__(self) -> str:
        return f"{self.clock}{self.op}{self.const}"


@dataclass(frozen=True)
class ClockConstraint:
    conjuncts: tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "conjuncts", tuple(self.conjuncts))

    @classmethod
    def of(cls, *atoms: tuple[str, str, int]) -> ClockConstraint:
        return cls(tuple(Atom(*a) for a in atoms))

    @property
    def clocks(self) -> frozenset[str]:
        return frozenset(a.clock for a in self.conjuncts)

    def holds(self, valuation: Mapping[str, float]) -> bool:
        return all(a.holds(valuation[a.clock]) for a in self.conjuncts)

    def __str__(self) -> str:
        return " && ".join(map(str, self.conjuncts)) if self.conjuncts else "true"


TRUE = ClockConstraint()


@dataclass(frozen=True)
class TaTransition:
    source: State
    target: State
    label: str
    resets: frozenset[str] = frozenset()
    guard: ClockConstraint = TRUE

    def __post_init__(self):
        object.__setattr__(self, "resets", frozenset(self.resets))


@dataclass(frozen=True)
class TimedAutomaton:
    """A timed automaton.

    Transitions may carry the masking symbol as label; this is reserved for
    derived automata such as the counter construction of the timed filter.
    """

    alphabet: Alphabet
    states: tuple[State, ...]
    initial: State
    accepting: frozenset[State]
    clocks: tuple[str, ...]
    transitions: tuple[TaTransition, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "clocks", tuple(self.clocks))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        known = set(self.states)
        if len(known) != len(self.states):
            raise InputError("duplicate states")
        if len(set(self.clocks)) != len(self.clocks):
            raise InputError("duplicate clocks")
        if self.initial not in known:
            raise InputError(f"initial state {self.initial!r} is not declared")
        if not self.accepting <= known:
            raise InputError(f"undeclared accepting states {set(self.accepting - known)}")
        clocks = set(self.clocks)
        for tr in self.transitions:
            if tr.source not in known or tr.target not in known:
                raise InputError(f"transition {tr} uses an undeclared state")
            self.alphabet.check(tr.label)
            if not tr.resets <= clocks:
                raise InputError(f"transition {tr} resets undeclared clocks")
            if not tr.guard.clocks <= clocks:
                raise InputError(f"transition {tr} guards undeclared clocks")

    @cached_property
    def outgoing(self) -> dict[tuple[State, str], tuple[TaTransition, ...]]:
        out = defaultdict(list)
        for tr in self.transitions:
            out[tr.source, tr.label].append(tr)
        return {k: tuple(v) for k, v in out.items()}

    def max_constants(self) -> dict[str, int]:
        """Largest constant each clock is compared against (0 if never guarded)."""
        k = {x: 0 for x in self.clocks}
        for tr in self.transitions:
            for atom in tr.guard.conjuncts:
                k[atom.clock] = max(k[atom.clock], atom.const)
        return k


def ta_configurations(ta: TimedAutomaton, w: TimedWord, origin: float = 0.0) -> Iterator[frozenset]:
    """Concrete configurations after each event of ``w``.

    A configuration is ``(state, last_reset)`` where ``last_reset[c]`` is the
    absolute time clock ``c`` was last reset, so its value at time ``t`` is
    ``t - last_reset[c]``. All clocks start at 0 at time ``origin``.
    """
    clocks = ta.clocks
    configs = frozenset([(ta.initial, (origin,) * len(clocks))])
    out = ta.outgoing
    for label, ts in w.events:
        ta.alphabet.check(label)
        nxt = set()
        for state, resets in configs:
            for tr in out.get((state, label), ()):
                valuation = {x: ts - r for x, r in zip(clocks, resets)}
                if tr.guard.holds(valuation):
                    nxt.add((tr.target, tuple(ts if x in tr.resets else r for x, r in zip(clocks, resets))))
        configs = frozenset(nxt)
        yield configs


def ta_accepts(ta: TimedAutomaton, w: TimedWord) -> bool:
    configs = frozenset([(ta.initial, ())])
    for configs in ta_configurations(ta, w):
        if not configs:
            return False
    return any(s in ta.accepting for s, _ in configs)
