import random

import pytest
from hypothesis import strategies as st

from moorefilter.automata import Alphabet, Nfa, TimedWord
from moorefilter.oracles import random_nfa, random_ta
from moorefilter.patterns import pattern_aab, within_two

W2 = TimedWord((("a", 0.1), ("b", 2.5), ("a", 3.5), ("b", 4.8)))


@pytest.fixture
def aab():
    return pattern_aab()


@pytest.fixture
def two_second():
    return within_two()


@pytest.fixture
def w2():
    return W2


@st.composite
def nfas(draw, max_states=4, max_symbols=2):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_nfa(random.Random(seed), max_states=max_states, max_symbols=max_symbols)


@st.composite
def nfa_and_word(draw, max_states=4, max_len=12):
    nfa = draw(nfas(max_states=max_states))
    w = draw(st.lists(st.sampled_from(nfa.alphabet.symbols), max_size=max_len))
    return nfa, w


@st.composite
def tas(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_ta(random.Random(seed))


@st.composite
def timed_words(draw, alphabet=("a", "b"), max_len=10):
    """Timestamps on a quarter grid keep float arithmetic exact."""
    steps = draw(st.lists(st.integers(1, 12), max_size=max_len))
    labels = draw(st.lists(st.sampled_from(alphabet), min_size=len(steps), max_size=len(steps)))
    t, events = 0, []
    for a, s in zip(labels, steps):
        t += s
        events.append((a, t / 4))
    return TimedWord(tuple(events))


def empty_nfa(symbols=("a", "b")):
    return Nfa(Alphabet(symbols), ("s0",), "s0", set(), set())
