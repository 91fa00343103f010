"""Filter Moore machines for timed pattern matching.

The pattern timed automaton is first extended with step counters, then
one-clock determinized. The resulting finite automaton reads (label, dwell
time) pairs and drives a buffer of ``N`` pass/mask labels; the filter emits
only verdicts, which are applied to a copy of the timed word afterwards.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .automata import BOTTOM, TRUE, InputError, TaTransition, TimedAutomaton, TimedWord
from .oneclock import DetOneClockTa, determinize_rta, ta_to_rta
from .untimed import MASK, PASS


@dataclass(frozen=True)
class CounterTa:
    base: TimedAutomaton
    buffer_size: int
    ta: TimedAutomaton  # states are (original state, counter) pairs

    def target_states(self) -> set:
        return {self.ta.initial} | {tr.target for tr in self.ta.transitions}


def build_counter_ta(ta: TimedAutomaton, N: int) -> CounterTa:
    if not isinstance(N, int) or N < 1:
        raise InputError(f"buffer size must be a positive integer, got {N!r}")
    init = (ta.initial, 0)
    all_clocks = frozenset(ta.clocks)
    trans = [TaTransition(init, init, a, all_clocks, TRUE) for a in ta.alphabet.with_bottom()]
    for tr in ta.transitions:
        for n in range(N):
            trans.append(TaTransition((tr.source, n), (tr.target, n + 1), tr.label, tr.resets, tr.guard))
        trans.append(TaTransition((tr.source, N), (tr.target, 1), tr.label, tr.resets, tr.guard))
    states = tuple((s, n) for s in ta.states for n in range(N + 1))
    accepting = frozenset((s, n) for s in ta.accepting for n in range(N + 1))
    counter = TimedAutomaton(ta.alphabet, states, init, accepting, ta.clocks, tuple(trans))
    return CounterTa(ta, N, counter)


class TimedFilter:
    """Non-buffer part of the timed filter plus per-state buffer actions.

    ``passes(q)`` is the number of trailing buffer cells marked ``pass`` when
    ``q`` is entered: ``N`` if some counter in ``q`` equals ``N``, else the
    largest counter of an accepting original state, else 0.
    """

    def __init__(self, counter_ta: CounterTa, det: DetOneClockTa):
        self.counter_ta = counter_ta
        self.det = det
        self._passes: list[int] = []
        self._has_n: list[bool] = []
        self._psi: list[int] = []
        reseed = det.step(det.initial, BOTTOM, 0.0)
        if reseed is None:
            raise AssertionError("the masking symbol must always be readable from the initial state")
        self.reseed = reseed  # state reached by the masking symbol from the initial state

    @property
    def buffer_size(self) -> int:
        return self.counter_ta.buffer_size

    @property
    def alphabet(self):
        return self.counter_ta.base.alphabet

    @property
    def num_states(self) -> int:
        return self.det.num_states

    def _fill(self, q: int) -> None:
        N = self.buffer_size
        accepting = self.counter_ta.base.accepting
        rta_states = self.det.rta.states
        while len(self._passes) <= q:
            pairs = [rta_states[r][0] for r in self.det.states[len(self._passes)]]
            hn = any(n == N for _, n in pairs)
            p = max((n for s, n in pairs if s in accepting), default=0)
            self._has_n.append(hn)
            self._psi.append(p)
            self._passes.append(N if hn else p)

    def passes(self, q: int) -> int:
        if q >= len(self._passes):
            self._fill(q)
        return self._passes[q]

    def has_counter_n(self, q: int) -> bool:
        self._fill(q)
        return self._has_n[q]

    def psi(self, q: int) -> int:
        self._fill(q)
        return self._psi[q]

    def step(self, q: int, label: str, dwell: float) -> int:
        nxt = self.det.step(q, label, dwell)
        return self.reseed if nxt is None else nxt


def build_timed_filter(ta: TimedAutomaton, N: int, max_states: int = 200_000, lazy: bool = False) -> TimedFilter:
    """Counter construction, zone abstraction and one-clock determinization.

    With ``lazy`` the determinization is only expanded along the words
    actually filtered, which avoids subset blow-ups for large ``N``.
    """
    counter = build_counter_ta(ta, N)
    rta = ta_to_rta(counter.ta, max_states=max_states)
    det = determinize_rta(rta, counter.ta.alphabet.with_bottom(), max_states=max_states, lazy=lazy)
    return TimedFilter(counter, det)


class TimedMasker:
    """Streaming run of a :class:`TimedFilter`.

    ``push`` consumes one event and returns the verdict (True = pass) of the
    event that entered ``N`` pushes earlier; the first ``N`` verdicts belong
    to the initial all-mask buffer.
    """

    def __init__(self, f: TimedFilter):
        self.filter = f
        self.state = f.det.initial
        n = f.buffer_size
        self.labels = deque([False] * n, maxlen=n)
        self.last_time = 0.0
        self._symbols = frozenset(f.alphabet.symbols)

    def push(self, label: str, ts: float) -> bool:
        if label not in self._symbols:
            raise InputError(f"unknown label {label!r}")
        if ts <= self.last_time:
            raise InputError(f"timestamps must strictly increase ({self.last_time} then {ts})")
        return self._advance(label, ts)

    def _advance(self, label: str, ts: float) -> bool:
        f = self.filter
        out = self.labels[0]
        self.state = q = f.step(self.state, label, ts - self.last_time)
        self.last_time = ts
        self.labels.append(False)
        p = f.passes(q)
        if p:
            labels = self.labels
            n = f.buffer_size
            for k in range(n - p, n):
                labels[k] = True
        return out

    def flush(self) -> list[bool]:
        """Pad with masking symbols at the last timestamp (dwell 0)."""
        return [self._advance(BOTTOM, self.last_time) for _ in range(self.filter.buffer_size)]


@dataclass(frozen=True)
class MaskStream:
    verdicts: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.verdicts)

    def __iter__(self):
        return iter(self.verdicts)

    @property
    def passed(self) -> list[int]:
        return [k + 1 for k, v in enumerate(self.verdicts) if v == PASS]


def stream_verdicts(f: TimedFilter, events: Iterable[tuple[str, float]]) -> Iterator[tuple[tuple[str, float], bool]]:
    """Yield ``(event, passed)`` pairs with the event delayed by exactly ``N`` inputs."""
    m = TimedMasker(f)
    pending: deque = deque()
    n = f.buffer_size
    for ev in events:
        verdict = m.push(*ev)
        pending.append(ev)
        if len(pending) > n:
            yield pending.popleft(), verdict
    # with fewer than N events, the leading flush verdicts still belong to the initial buffer
    skip = n - len(pending)
    for k, verdict in enumerate(m.flush()):
        if k >= skip:
            yield pending.popleft(), verdict


def filter_timed_word(f: TimedFilter, w: TimedWord) -> MaskStream:
    m = TimedMasker(f)
    out = [m.push(a, ts) for a, ts in w.events]
    out.extend(m.flush())
    n = f.buffer_size
    assert not any(out[:n]), "the first N verdicts come from the all-mask initial buffer"
    return MaskStream(tuple(PASS if v else MASK for v in out[n:]))


def apply_mask(w: TimedWord, m: MaskStream) -> TimedWord:
    if len(w) != len(m):
        raise InputError(f"word has {len(w)} events but the mask has {len(m)} verdicts")
    return TimedWord(tuple((a if v == PASS else BOTTOM, ts) for (a, ts), v in zip(w.events, m.verdicts)))


class RunSuppressor:
    """Streaming replacement of each run of 3+ masked events by its first and last event."""

    def __init__(self):
        self._first = None
        self._last = None
        self._count = 0

    def push(self, event) -> list:
        if event[0] == BOTTOM:
            if self._count == 0:
                self._first = event
            self._last = event
            self._count += 1
            return []
        return self._close() + [event]

    def _close(self) -> list:
        if self._count == 0:
            out = []
        elif self._count == 1:
            out = [self._first]
        else:
            out = [self._first, self._last]
        self._first = self._last = None
        self._count = 0
        return out

    def flush(self) -> list:
        return self._close()


def suppress_runs(masked: Iterable[tuple[str, float]]) -> TimedWord:
    sup = RunSuppressor()
    out = []
    for ev in masked:
        out.extend(sup.push(ev))
    out.extend(sup.flush())
    return TimedWord(tuple(out))
