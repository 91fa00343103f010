"""Filter Moore machines for untimed pattern matching.

The machine's state is split as in the construction: a determinized
"non-buffer" part, sets of ``(nfa state, counter)`` pairs, precomputed as a
DFA, and a FIFO buffer of ``N`` (character, pass/mask) cells that is kept
outside the DFA. Each DFA state carries the number of trailing buffer cells
that must be switched to ``pass`` when it is entered.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .automata import BOTTOM, InputError, Nfa, Word

PASS = "pass"
MASK = "mask"

# a non-buffer state: sorted ((state index, counter), ...) pairs
NonBufferState = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class BufferCell:
    character: str
    label: str  # PASS or MASK

    def __post_init__(self):
        if self.label not in (PASS, MASK):
            raise ValueError(f"bad buffer label {self.label!r}")


def initial_nonbuffer(nfa: Nfa) -> NonBufferState:
    return ((nfa.index[nfa.initial], 0),)


def nonbuffer_successor(nfa: Nfa, n_buf: int, current: NonBufferState, a: str) -> NonBufferState:
    """Counter-annotated subset step; the initial state is always re-seeded with counter 0."""
    succ = nfa.successors
    states = nfa.states
    index = nfa.index
    out = {(index[nfa.initial], 0)}
    for s, n in current:
        targets = succ.get((states[s], a))
        if targets:
            c = n % n_buf + 1
            out.update((index[t], c) for t in targets)
    return tuple(sorted(out))


def pass_count(nfa: Nfa, n_buf: int, state: NonBufferState) -> int:
    """How many trailing buffer cells to mark ``pass`` after entering ``state``.

    ``N`` when some counter reached ``N`` (pass everything), otherwise the
    largest counter carried by an accepting NFA state, otherwise 0.
    """
    if any(n == n_buf for _, n in state):
        return n_buf
    accepting = nfa.accepting
    states = nfa.states
    return max((n for s, n in state if states[s] in accepting), default=0)


def action_name(n_buf: int, passes: int) -> str:
    if passes == n_buf:
        return "pass-all"
    if passes:
        return f"pass-suffix({passes})"
    return "shift-mask"


@dataclass(frozen=True)
class UntimedFilter:
    nfa: Nfa
    buffer_size: int
    symbols: tuple[str, ...]  # input alphabet with the masking symbol last
    states: tuple[NonBufferState, ...]  # states[0] is the initial state
    delta: tuple[tuple[int, ...], ...]  # delta[q][symbol index] -> q'
    passes: tuple[int, ...]  # pass count applied when entering q

    @property
    def num_states(self) -> int:
        return len(self.states)

    def symbol_index(self, a: str) -> int:
        try:
            return self._sym[a]
        except KeyError:
            raise InputError(f"unknown label {a!r}") from None

    @cached_property
    def _sym(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.symbols)}

    def next_state(self, q: int, symbol: int) -> int:
        return self.delta[q][symbol]

    def describe_state(self, q: int) -> str:
        st = self.nfa.states
        return "{" + ", ".join(f"({st[s]},{n})" for s, n in self.states[q]) + "}"


def build_untimed_filter(nfa: Nfa, N: int) -> UntimedFilter:
    """Reachable part of the counter-annotated subset construction over the alphabet plus the masking symbol."""
    if not isinstance(N, int) or N < 1:
        raise InputError(f"buffer size must be a positive integer, got {N!r}")
    symbols = nfa.alphabet.with_bottom()
    init = initial_nonbuffer(nfa)
    ids = {init: 0}
    states = [init]
    delta: list[tuple[int, ...]] = []
    queue = deque([init])
    # pairs[a][s][n] = successor pairs of NFA state s with counter n on a
    pairs = []
    for a in symbols:
        per_state = []
        for s in nfa.states:
            targets = [nfa.index[t] for t in nfa.successors.get((s, a), ())]
            per_state.append([tuple((t, n % N + 1) for t in targets) for n in range(N + 1)])
        pairs.append(per_state)
    while queue:
        cur = queue.popleft()
        row = []
        for table in pairs:
            out = {init[0]}
            for s, n in cur:
                out.update(table[s][n])
            nxt = tuple(sorted(out))
            q = ids.get(nxt)
            if q is None:
                q = ids[nxt] = len(states)
                states.append(nxt)
                queue.append(nxt)
            row.append(q)
        delta.append(tuple(row))
    passes = tuple(pass_count(nfa, N, s) for s in states)
    return UntimedFilter(nfa, N, symbols, tuple(states), tuple(delta), passes)


class LazyUntimedFilter:
    """The same machine as :func:`build_untimed_filter`, determinized on demand.

    Only states actually visited are created, which keeps large buffer
    sizes affordable when the reachable DFA is big.
    """

    def __init__(self, nfa: Nfa, N: int):
        if not isinstance(N, int) or N < 1:
            raise InputError(f"buffer size must be a positive integer, got {N!r}")
        self.nfa = nfa
        self.buffer_size = N
        self.symbols = nfa.alphabet.with_bottom()
        self._sym = {a: k for k, a in enumerate(self.symbols)}
        init = initial_nonbuffer(nfa)
        self.states: list[NonBufferState] = [init]
        self._ids = {init: 0}
        self._delta: dict[tuple[int, int], int] = {}
        self.passes: list[int] = [pass_count(nfa, N, init)]

    @property
    def num_states(self) -> int:
        return len(self.states)

    def symbol_index(self, a: str) -> int:
        try:
            return self._sym[a]
        except KeyError:
            raise InputError(f"unknown label {a!r}") from None

    def next_state(self, q: int, symbol: int) -> int:
        t = self._delta.get((q, symbol))
        if t is None:
            nxt = nonbuffer_successor(self.nfa, self.buffer_size, self.states[q], self.symbols[symbol])
            t = self._ids.get(nxt)
            if t is None:
                t = self._ids[nxt] = len(self.states)
                self.states.append(nxt)
                self.passes.append(pass_count(self.nfa, self.buffer_size, nxt))
            self._delta[q, symbol] = t
        return t


@dataclass(frozen=True)
class FilterRunState:
    state: int
    buffer: tuple[BufferCell, ...]

    @classmethod
    def initial(cls, f: UntimedFilter) -> FilterRunState:
        return cls(0, (BufferCell(BOTTOM, MASK),) * f.buffer_size)


def filter_step(f: UntimedFilter, rs: FilterRunState, a: str) -> tuple[FilterRunState, str]:
    """One Moore step: output the head cell of ``rs``, then shift ``a`` in."""
    head = rs.buffer[0]
    out = head.character if head.label == PASS else BOTTOM
    q = f.next_state(rs.state, f.symbol_index(a))
    p = f.passes[q]
    cells = list(rs.buffer[1:]) + [BufferCell(a, MASK)]
    for k in range(len(cells) - p, len(cells)):
        cells[k] = BufferCell(cells[k].character, PASS)
    return FilterRunState(q, tuple(cells)), out


class UntimedMasker:
    """Mutable streaming run of an :class:`UntimedFilter`.

    ``push`` consumes one character and returns the character leaving the
    buffer, so the output lags the input by exactly ``N`` steps.
    """

    def __init__(self, f: UntimedFilter | LazyUntimedFilter):
        self.filter = f
        self.state = 0
        n = f.buffer_size
        self.chars = deque([BOTTOM] * n, maxlen=n)
        self.passed = deque([False] * n, maxlen=n)

    def push(self, a: str) -> str:
        f = self.filter
        out = self.chars[0] if self.passed[0] else BOTTOM
        self.chars.append(a)  # maxlen drops the head
        self.passed.append(False)
        self.state = q = f.next_state(self.state, f.symbol_index(a))
        p = f.passes[q]
        if p:
            passed = self.passed
            n = f.buffer_size
            for k in range(n - p, n):
                passed[k] = True
        return out

    def flush(self) -> list[str]:
        return [self.push(BOTTOM) for _ in range(self.filter.buffer_size)]


def filter_padded(f: UntimedFilter, w: Word) -> list[str]:
    """Full Moore output over ``w`` followed by ``N`` masking symbols."""
    m = UntimedMasker(f)
    out = [m.push(a) for a in _checked(f, w)]
    out.extend(m.flush())
    return out


def filter_word(f: UntimedFilter, w: Word) -> list[str]:
    return filter_padded(f, w)[f.buffer_size:]


def _checked(f: UntimedFilter, w: Iterable[str]):
    for a in w:
        if a == BOTTOM:
            raise InputError("input words range over the pattern alphabet")
        yield a


def filter_word_otf(nfa: Nfa, N: int, w: Word) -> list[str]:
    """Same output as :func:`filter_word`, determinizing on demand.

    Characters are emitted right after the label update, i.e. with delay
    ``N - 1``; the last ``N - 1`` cells are flushed directly since padding
    never changes existing labels.
    """
    if not isinstance(N, int) or N < 1:
        raise InputError(f"buffer size must be a positive integer, got {N!r}")
    current = initial_nonbuffer(nfa)
    chars = [BOTTOM] * N
    labels = [False] * N
    out: list[str] = []
    for a in w:
        if a == BOTTOM:
            raise InputError("input words range over the pattern alphabet")
        nfa.alphabet.check(a)
        nxt = nonbuffer_successor(nfa, N, current, a)
        chars = chars[1:] + [a]
        labels = labels[1:] + [False]
        p = pass_count(nfa, N, nxt)
        for k in range(N - p, N):
            labels[k] = True
        out.append(chars[0] if labels[0] else BOTTOM)
        current = nxt
    for k in range(1, N):
        out.append(chars[k] if labels[k] else BOTTOM)
    # the first N - 1 emissions are the initial buffer cells
    return out[N - 1:]


def masked_positions(original: Sequence[str], filtered: Sequence[str]) -> list[int]:
    """1-based positions masked by a filter."""
    return [k + 1 for k, (a, b) in enumerate(zip(original, filtered)) if b == BOTTOM and a != BOTTOM]
