from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moorefilter.automata import BOTTOM, InputError
from moorefilter.oracles import untimed_match_set
from moorefilter.untimed import (
    MASK,
    PASS,
    BufferCell,
    FilterRunState,
    LazyUntimedFilter,
    action_name,
    build_untimed_filter,
    filter_padded,
    filter_step,
    filter_word,
    filter_word_otf,
    masked_positions,
)

from conftest import empty_nfa, nfa_and_word, nfas

# the non-buffer DFA of the aa*b filter with N = 2, states as sets of (state, counter)
Q0 = {("s0", 0)}
Q1 = {("s0", 0), ("s1", 1)}
Q2 = {("s0", 0), ("s1", 1), ("s1", 2)}
Q3 = {("s0", 0), ("s2", 2)}
Q4 = {("s0", 0), ("s2", 1), ("s2", 2)}
AAB_DFA = {
    (0, "a"): 1, (0, "b"): 0,
    (1, "a"): 2, (1, "b"): 3,
    (2, "a"): 2, (2, "b"): 4,
    (3, "a"): 1, (3, "b"): 0,
    (4, "a"): 1, (4, "b"): 0,
}
NAMED = [Q0, Q1, Q2, Q3, Q4]


def named(f, q):
    return {(f.nfa.states[s], n) for s, n in f.states[q]}


def test_aab_dfa_exactly(aab):
    f = build_untimed_filter(aab, 2)
    assert f.num_states == 5
    ids = {frozenset(named(f, q)): q for q in range(f.num_states)}
    assert set(ids) == {frozenset(s) for s in NAMED}
    for (src, a), dst in AAB_DFA.items():
        q = ids[frozenset(NAMED[src])]
        assert named(f, f.delta[q][f.symbol_index(a)]) == NAMED[dst]
    for q in range(f.num_states):
        assert named(f, f.delta[q][f.symbol_index(BOTTOM)]) == Q0
    assert named(f, 0) == Q0
    actions = {frozenset(named(f, q)): action_name(2, f.passes[q]) for q in range(5)}
    assert actions[frozenset(Q0)] == "shift-mask"
    assert actions[frozenset(Q1)] == "shift-mask"
    assert actions[frozenset(Q2)] == "pass-all"
    assert actions[frozenset(Q3)] == "pass-all"
    assert actions[frozenset(Q4)] == "pass-all"


def test_run_trace(aab):
    f = build_untimed_filter(aab, 2)
    trace = [
        ("a", BOTTOM, Q1, (BOTTOM, "a"), (MASK, MASK)),
        ("b", BOTTOM, Q3, ("a", "b"), (PASS, PASS)),
        ("b", "a", Q0, ("b", "b"), (PASS, MASK)),
        ("b", "b", Q0, ("b", "b"), (MASK, MASK)),
        ("a", BOTTOM, Q1, ("b", "a"), (MASK, MASK)),
        ("a", BOTTOM, Q2, ("a", "a"), (PASS, PASS)),
        ("b", "a", Q4, ("a", "b"), (PASS, PASS)),
        (BOTTOM, "a", Q0, ("b", BOTTOM), (PASS, MASK)),
        (BOTTOM, "b", Q0, (BOTTOM, BOTTOM), (MASK, MASK)),
    ]
    rs = FilterRunState.initial(f)
    assert rs.buffer == (BufferCell(BOTTOM, MASK),) * 2
    for a, out, state, chars, labels in trace:
        rs, got = filter_step(f, rs, a)
        assert got == out
        assert named(f, rs.state) == state
        assert tuple(c.character for c in rs.buffer) == chars
        assert tuple(c.label for c in rs.buffer) == labels


def test_worked_example(aab):
    f = build_untimed_filter(aab, 2)
    assert "".join(filter_word(f, "abbbaab")) == "ab⊥⊥aab"
    assert "".join(filter_word_otf(aab, 2, "abbbaab")) == "ab⊥⊥aab"
    assert masked_positions("abbbaab", filter_word(f, "abbbaab")) == [3, 4]


def test_all_mask_state_reading_bottom(aab):
    f = build_untimed_filter(aab, 2)
    _, out = filter_step(f, FilterRunState.initial(f), BOTTOM)
    assert out == BOTTOM


def test_trivial_filters():
    nfa = empty_nfa()
    for N in (1, 2, 4):
        f = build_untimed_filter(nfa, N)
        assert f.num_states == 1
        assert all(t == 0 for t in f.delta[0])
        assert filter_word(f, "aaa") == [BOTTOM] * 3
    assert filter_word_otf(nfa, 3, "") == []


def test_errors(aab):
    with pytest.raises(InputError):
        build_untimed_filter(aab, 0)
    with pytest.raises(InputError):
        filter_word_otf(aab, 0, "a")
    f = build_untimed_filter(aab, 2)
    with pytest.raises(InputError):
        filter_word(f, "ac")
    with pytest.raises(InputError):
        filter_word(f, ["a", BOTTOM])
    with pytest.raises(ValueError):
        BufferCell("a", "maybe")


def _subset_states(nfa, N):
    """Independent breadth-first enumeration of the counter-annotated subsets."""
    init = frozenset([(nfa.initial, 0)])
    seen = {init}
    todo = deque([init])
    while todo:
        cur = todo.popleft()
        for a in nfa.alphabet.with_bottom():
            nxt = {(nfa.initial, 0)}
            for s, n in cur:
                for src, label, dst in nfa.transitions:
                    if src == s and label == a:
                        nxt.add((dst, 1 if n == N else n + 1))
            nxt = frozenset(nxt)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


@settings(max_examples=60, deadline=None)
@given(nfas(max_states=4), st.integers(1, 3))
def test_state_space_matches_brute_force(nfa, N):
    f = build_untimed_filter(nfa, N)
    states = {frozenset(named(f, q)) for q in range(f.num_states)}
    assert states == _subset_states(nfa, N)
    assert f.num_states <= 2 ** (N * len(nfa.states))


@settings(max_examples=200, deadline=None)
@given(nfa_and_word(max_len=20), st.integers(1, 5))
def test_filter_contract(instance, N):
    nfa, w = instance
    f = build_untimed_filter(nfa, N)
    padded = filter_padded(f, w)
    assert padded[:N] == [BOTTOM] * N
    assert len(padded) == len(w) + N
    for a, b in zip(w, padded[N:]):
        assert b in (a, BOTTOM)


@settings(max_examples=200, deadline=None)
@given(nfa_and_word(max_len=20), st.integers(1, 5))
def test_otf_and_lazy_agree_with_precomputed(instance, N):
    nfa, w = instance
    f = build_untimed_filter(nfa, N)
    want = filter_word(f, w)
    assert filter_word_otf(nfa, N, w) == want
    assert filter_word(LazyUntimedFilter(nfa, N), w) == want


@settings(max_examples=200, deadline=None)
@given(nfa_and_word(max_len=25), st.integers(1, 6))
def test_soundness_property(instance, N):
    nfa, w = instance
    out = filter_word(build_untimed_filter(nfa, N), w)
    for k in untimed_match_set(w, nfa).covered():
        assert out[k - 1] == w[k - 1]
