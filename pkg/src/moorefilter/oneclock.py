"""One-clock determinization of timed automata.

Two stages: a zone-based over-approximation of the timed automaton by a
real-time automaton (one clock ``y``, reset on every transition, so a guard
only constrains the dwell time), then a subset construction of the RTA that
splits dwell times into the coarsest partition respecting all guards.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property

from .automata import Alphabet, State, TimedAutomaton, TimedWord, ta_accepts
from .dbm import (
    DWELL_CLOCK,
    Dbm,
    Interval,
    canonicalize,
    intersect_guard,
    is_empty,
    normalize_k,
    position_key,
    project_to_y,
    reset_and_elapse,
    up,
)


@dataclass(frozen=True)
class RtaTransition:
    source: int
    label: str
    guard: Interval
    target: int


@dataclass(frozen=True)
class Rta:
    """Real-time automaton whose states are ``(original state, zone)`` pairs.

    State 0 is initial. Every transition implicitly resets the dwell clock.
    """

    alphabet: Alphabet
    states: tuple[tuple[State, Dbm], ...]
    accepting: frozenset[int]
    transitions: tuple[RtaTransition, ...]

    initial = 0

    @cached_property
    def outgoing(self) -> dict[tuple[int, str], tuple[tuple[Interval, int], ...]]:
        out = defaultdict(list)
        for tr in self.transitions:
            out[tr.source, tr.label].append((tr.guard, tr.target))
        return {k: tuple(v) for k, v in out.items()}

    def accepts(self, w: TimedWord) -> bool:
        """Nondeterministic acceptance (used by tests)."""
        current = {0}
        prev = 0.0
        for label, ts in w.events:
            u = ts - prev
            prev = ts
            current = {t for s in current for guard, t in self.outgoing.get((s, label), ()) if guard.contains(u)}
            if not current:
                return False
        return not current.isdisjoint(self.accepting)


def normalization_constants(ta: TimedAutomaton) -> dict[str, int]:
    k = ta.max_constants()
    k[DWELL_CLOCK] = max(k.values(), default=0)
    return k


def ta_to_rta(ta: TimedAutomaton, max_states: int = 200_000) -> Rta:
    """Over-approximate ``ta`` by a real-time automaton (worklist over zones).

    Zones are k-normalized after the reset/elapse step so that only finitely
    many ``(state, zone)`` pairs exist.
    """
    clocks = ta.clocks + (DWELL_CLOCK,)
    k = normalization_constants(ta)
    z0 = normalize_k(canonicalize(up(Dbm.zero(clocks))), k)
    ids: dict[tuple[State, tuple], int] = {(ta.initial, z0.matrix): 0}
    states: list[tuple[State, Dbm]] = [(ta.initial, z0)]
    edges: dict[tuple[int, str, Interval, int], None] = {}
    by_source = defaultdict(list)
    for tr in ta.transitions:
        by_source[tr.source].append(tr)
    resets_cache: dict[frozenset, frozenset] = {}
    queue = deque([0])
    while queue:
        src = queue.popleft()
        s, zone = states[src]
        for tr in by_source.get(s, ()):
            guarded = intersect_guard(zone, tr.guard)
            if is_empty(guarded):
                continue
            dwell = project_to_y(guarded)
            resets = resets_cache.get(tr.resets)
            if resets is None:
                resets = resets_cache[tr.resets] = tr.resets | {DWELL_CLOCK}
            nxt = normalize_k(reset_and_elapse(guarded, resets), k)
            key = (tr.target, nxt.matrix)
            dst = ids.get(key)
            if dst is None:
                dst = ids[key] = len(states)
                states.append((tr.target, nxt))
                queue.append(dst)
                if len(states) > max_states:
                    raise RuntimeError(f"zone exploration exceeded {max_states} states")
            edges[src, tr.label, dwell, dst] = None
    transitions = tuple(RtaTransition(*e) for e in edges)
    accepting = frozenset(i for i, (s, _) in enumerate(states) if s in ta.accepting)
    return Rta(ta.alphabet, tuple(states), accepting, transitions)


def elementary_intervals(guards: list[Interval]) -> list[tuple[int, int | None]]:
    """Coarsest partition of the non-negative reals that no guard splits, as cut pairs."""
    cuts = {0}
    for g in guards:
        lo, hi = g.cuts()
        cuts.add(lo)
        if hi is not None:
            cuts.add(hi)
    ordered = sorted(cuts)
    return [(lo, ordered[i + 1] if i + 1 < len(ordered) else None) for i, lo in enumerate(ordered)]


def _piece_inside(piece: tuple[int, int | None], guard: Interval) -> bool:
    plo, phi = piece
    glo, ghi = guard.cuts()
    if plo < glo:
        return False
    return ghi is None or (phi is not None and phi <= ghi)


class DetOneClockTa:
    """Deterministic one-clock automaton over sets of RTA states.

    For each ``(q, label)`` the table holds the sorted lower cuts of the
    elementary dwell intervals, the successor for each (``-1``: no
    transition) and the upper cuts. Built eagerly by :func:`determinize_rta`,
    or on demand when ``lazy`` is set, in which case only visited states exist.
    """

    initial = 0

    def __init__(self, rta: Rta, symbols: tuple[str, ...] | None = None, max_states: int = 200_000):
        self.rta = rta
        self.symbols = tuple(rta.alphabet.symbols if symbols is None else symbols)
        self.max_states = max_states
        init = frozenset([rta.initial])
        self.states: list[frozenset[int]] = [init]
        self._ids = {init: 0}
        self.table: dict[tuple[int, str], tuple | None] = {}

    @property
    def alphabet(self) -> Alphabet:
        return self.rta.alphabet

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def accepting(self) -> frozenset[int]:
        acc = self.rta.accepting
        return frozenset(i for i, s in enumerate(self.states) if not s.isdisjoint(acc))

    def is_accepting(self, q: int) -> bool:
        return not self.states[q].isdisjoint(self.rta.accepting)

    def _state_id(self, subset: frozenset[int]) -> int:
        t = self._ids.get(subset)
        if t is None:
            t = self._ids[subset] = len(self.states)
            self.states.append(subset)
            if len(self.states) > self.max_states:
                raise RuntimeError(f"determinization exceeded {self.max_states} states")
        return t

    def expand(self, q: int, label: str):
        """Compute (and cache) the row for ``(q, label)``; None if no edge carries ``label``."""
        key = (q, label)
        if key in self.table:
            return self.table[key]
        out = self.rta.outgoing
        edges = [e for r in self.states[q] for e in out.get((r, label), ())]
        entry = None
        if edges:
            pieces = elementary_intervals([g for g, _ in edges])
            targets = []
            for piece in pieces:
                succ = frozenset(t for g, t in edges if _piece_inside(piece, g))
                targets.append(self._state_id(succ) if succ else -1)
            entry = (tuple(lo for lo, _ in pieces), tuple(targets), tuple(hi for _, hi in pieces))
        self.table[key] = entry
        return entry

    def step(self, q: int, label: str, dwell: float) -> int | None:
        entry = self.table.get((q, label))
        if entry is None:
            entry = self.expand(q, label)
            if entry is None:
                return None
        lows, targets, _ = entry
        k = bisect_right(lows, position_key(dwell)) - 1
        t = targets[k]
        return None if t < 0 else t

    def explore(self) -> None:
        """Expand every reachable state."""
        q = 0
        while q < len(self.states):
            for a in self.symbols:
                self.expand(q, a)
            q += 1

    def transitions(self):
        """Yield ``(q, label, interval, q')`` for every live elementary interval built so far."""
        for (q, label), entry in self.table.items():
            if entry is None:
                continue
            lows, targets, highs = entry
            for lo, hi, t in zip(lows, highs, targets):
                if t >= 0:
                    yield q, label, Interval.from_cuts(lo, hi), t

    def run(self, w: TimedWord) -> int | None:
        q = 0
        prev = 0.0
        for label, ts in w.events:
            q = self.step(q, label, ts - prev)
            prev = ts
            if q is None:
                return None
        return q

    def accepts(self, w: TimedWord) -> bool:
        q = self.run(w)
        return q is not None and self.is_accepting(q)

    def original_states(self, q: int) -> set:
        return {self.rta.states[r][0] for r in self.states[q]}


def determinize_rta(
    rta: Rta, symbols: tuple[str, ...] | None = None, max_states: int = 200_000, lazy: bool = False
) -> DetOneClockTa:
    """Subset construction with elementary dwell intervals.

    ``symbols`` defaults to the RTA alphabet; derived automata pass the
    alphabet extended with the masking symbol.
    """
    det = DetOneClockTa(rta, symbols, max_states)
    if not lazy:
        det.explore()
    return det


def one_clock_determinize(ta: TimedAutomaton) -> DetOneClockTa:
    return determinize_rta(ta_to_rta(ta))


def check_simulation(ta: TimedAutomaton, det: DetOneClockTa, w: TimedWord) -> bool:
    """``ta`` accepting ``w`` implies ``det`` accepting it."""
    return not ta_accepts(ta, w) or det.accepts(w)
