"""Brute-force reference semantics, random instance generators and checking drivers.

Every driver takes a seed and a trial count, is deterministic, and returns a
:class:`SuiteReport` with the raw counterexample instances (no shrinking).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .automata import (
    BOTTOM,
    Alphabet,
    Atom,
    ClockConstraint,
    InputError,
    Nfa,
    TaTransition,
    TimedAutomaton,
    TimedWord,
    Word,
    is_stuck,
    nfa_run_exists,
    ta_accepts,
    ta_configurations,
    timed_subsequence_shift,
)
from .oneclock import one_clock_determinize
from .patterns import pattern_aab
from .timed import build_timed_filter, filter_timed_word
from .untimed import MASK, PASS, LazyUntimedFilter, build_untimed_filter, filter_word

# ---------------------------------------------------------------------------
# match sets


@dataclass(frozen=True)
class MatchSet:
    pairs: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for i, j in self.pairs:
            if not 1 <= i <= j:
                raise ValueError(f"bad match pair {(i, j)}")

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def covered(self) -> set[int]:
        """Positions lying inside at least one match."""
        return {k for i, j in self.pairs for k in range(i, j + 1)}


def untimed_match_set(w: Word, nfa: Nfa) -> MatchSet:
    """All ``(i, j)`` with ``w[i..j]`` accepted, one forward simulation per start index."""
    pairs = set()
    acc = nfa.accepting
    for i in range(len(w)):
        current = frozenset([nfa.initial])
        for j in range(i, len(w)):
            nfa.alphabet.check(w[j])
            current = nfa.step(current, w[j])
            if not current:
                break
            if not current.isdisjoint(acc):
                pairs.add((i + 1, j + 1))
    return MatchSet(frozenset(pairs))


def _accepts_from(nfa: Nfa, state, w: Word, pos: int, end: int) -> bool:
    if pos == end:
        return state in nfa.accepting
    return any(_accepts_from(nfa, t, w, pos + 1, end) for t in nfa.successors.get((state, w[pos]), ()))


def untimed_match_set_recursive(w: Word, nfa: Nfa) -> MatchSet:
    """Second oracle: depth-first search over runs for every segment."""
    n = len(w)
    return MatchSet(
        frozenset(
            (i + 1, j) for i in range(n) for j in range(i + 1, n + 1) if _accepts_from(nfa, nfa.initial, w, i, j)
        )
    )


def timed_index_match(w: TimedWord, ta: TimedAutomaton) -> MatchSet:
    """All ``(i, j)`` such that events ``i..j``, re-rooted at the timestamp of event ``i - 1``, are accepted."""
    pairs = set()
    n = len(w)
    acc = ta.accepting
    for i in range(1, n + 1):
        suffix = timed_subsequence_shift(w, i, n)
        for j, configs in enumerate(ta_configurations(ta, suffix), start=i):
            if not configs:
                break
            if any(s in acc for s, _ in configs):
                pairs.add((i, j))
    return MatchSet(frozenset(pairs))


def _ta_accepts_recursive(ta: TimedAutomaton, events, pos: int, state, values: dict, prev: float) -> bool:
    if pos == len(events):
        return state in ta.accepting
    label, ts = events[pos]
    d = ts - prev
    advanced = {x: v + d for x, v in values.items()}
    for tr in ta.outgoing.get((state, label), ()):
        if all(atom.holds(advanced[atom.clock]) for atom in tr.guard.conjuncts):
            nxt = {x: (0.0 if x in tr.resets else v) for x, v in advanced.items()}
            if _ta_accepts_recursive(ta, events, pos + 1, tr.target, nxt, ts):
                return True
    return False


def timed_index_match_recursive(w: TimedWord, ta: TimedAutomaton) -> MatchSet:
    """Independent oracle: explicit clock values and depth-first run search per segment."""
    pairs = set()
    n = len(w)
    for i in range(1, n + 1):
        origin = w.events[i - 2][1] if i > 1 else 0.0
        for j in range(i, n + 1):
            events = w.events[i - 1:j]
            if _ta_accepts_recursive(ta, events, 0, ta.initial, {x: 0.0 for x in ta.clocks}, origin):
                pairs.add((i, j))
    return MatchSet(frozenset(pairs))


def lemma1_mask_oracle(w: Word, nfa: Nfa, N: int, k: int) -> bool:
    """Whether position ``k`` (1-based) must be masked, by the combinatorial characterization.

    Position ``k`` is masked iff (1) no accepted segment ``w[i..k']`` with
    ``i <= k <= k' <= k + N - 1`` has ``(k' - i) mod N >= k' - k``, and
    (2) no segment ``w[k' - mN + 1 .. k']`` with ``m >= 1`` admits a run.
    Indices past the end refer to the masking padding. Segments starting
    before the word do not exist and impose nothing.
    """
    n = len(w)
    if not 1 <= k <= n:
        raise InputError(f"index {k} out of range for a word of length {n}")
    padded = list(w) + [BOTTOM] * N
    for kp in range(k, k + N):
        for i in range(1, k + 1):
            if (kp - i) % N >= kp - k and nfa.accepts(padded[i - 1:kp]):
                return False
        m = 1
        while kp - m * N + 1 >= 1:
            if not is_stuck(nfa, padded[kp - m * N:kp]):
                return False
            m += 1
    return True


# ---------------------------------------------------------------------------
# random instances


def random_nfa(rng: random.Random, max_states: int = 5, max_symbols: int = 3, density: float = 0.3) -> Nfa:
    n = rng.randint(1, max_states)
    sigma = ("a", "b", "c")[: rng.randint(1, max_symbols)]
    states = tuple(f"q{k}" for k in range(n))
    trans = {(s, a, t) for s in states for a in sigma for t in states if rng.random() < density}
    accepting = {s for s in states if rng.random() < 0.4} or {rng.choice(states)}
    return Nfa(Alphabet(sigma), states, states[0], accepting, trans)


def random_finite_nfa(rng: random.Random, max_states: int = 5, max_symbols: int = 3) -> Nfa:
    """Acyclic NFA whose accepting states have no outgoing transitions, so its language is finite."""
    n = rng.randint(2, max_states)
    sigma = ("a", "b", "c")[: rng.randint(1, max_symbols)]
    states = tuple(f"q{k}" for k in range(n))
    accepting = {s for s in states[1:] if rng.random() < 0.4} or {states[-1]}
    trans = set()
    for x in range(n):
        if states[x] in accepting:
            continue
        for y in range(x + 1, n):
            for a in sigma:
                if rng.random() < 0.35:
                    trans.add((states[x], a, states[y]))
    return Nfa(Alphabet(sigma), states, states[0], accepting, trans)


def trim(nfa: Nfa) -> Nfa:
    """Drop transitions into states from which no accepting state is reachable (same language)."""
    good = set(nfa.accepting)
    changed = True
    while changed:
        changed = False
        for src, _, dst in nfa.transitions:
            if dst in good and src not in good:
                good.add(src)
                changed = True
    kept = {(s, a, t) for s, a, t in nfa.transitions if s in good and t in good}
    return Nfa(nfa.alphabet, nfa.states, nfa.initial, nfa.accepting, kept)


def longest_accepted_length(nfa: Nfa) -> int | None:
    """Length of the longest accepted word of an acyclic NFA (None if nothing is accepted)."""
    best: dict = {}

    def longest(s):
        # longest path from s to an accepting state, -1 if none
        if s in best:
            return best[s]
        r = 0 if s in nfa.accepting else -1
        for src, _, dst in nfa.transitions:
            if src == s:
                sub = longest(dst)
                if sub >= 0:
                    r = max(r, sub + 1)
        best[s] = r
        return r

    r = longest(nfa.initial)
    return None if r < 0 else r


def random_word(rng: random.Random, alphabet: Sequence[str], length: int) -> list[str]:
    return [rng.choice(alphabet) for _ in range(length)]


_OPS = ("<", "<=", ">", ">=")


def random_ta(
    rng: random.Random,
    max_states: int = 4,
    max_clocks: int = 2,
    max_const: int = 3,
    reset_prob: float = 0.3,
    max_symbols: int = 2,
) -> TimedAutomaton:
    n = rng.randint(2, max_states)
    states = tuple(f"l{k}" for k in range(n))
    clocks = tuple(("x", "z")[: rng.randint(1, max_clocks)])
    sigma = ("a", "b", "c")[: rng.randint(1, max_symbols)]
    trans = []
    for s in states:
        for a in sigma:
            for _ in range(rng.choice((0, 1, 1, 2))):
                atoms = [Atom(x, rng.choice(_OPS), rng.randint(0, max_const)) for x in clocks if rng.random() < 0.5]
                resets = {x for x in clocks if rng.random() < reset_prob}
                trans.append(TaTransition(s, rng.choice(states), a, resets, ClockConstraint(tuple(atoms))))
    accepting = {s for s in states[1:] if rng.random() < 0.5} or {states[-1]}
    return TimedAutomaton(Alphabet(sigma), states, states[0], accepting, clocks, tuple(trans))


def random_timed_word(rng: random.Random, alphabet: Sequence[str], length: int, max_dwell: int = 8) -> TimedWord:
    """Timestamps are multiples of 1/4 so float arithmetic stays exact."""
    t = 0.0
    events = []
    for _ in range(length):
        t += rng.randint(1, max_dwell) / 4
        events.append((rng.choice(alphabet), t))
    return TimedWord(tuple(events))


def _dwell_interval(guard: ClockConstraint, values: dict):
    """Dwell times ``d > 0`` with the guard true at ``values + d`` as ``(lo, lo_strict, hi, hi_strict)``."""
    lo, lo_strict, hi, hi_strict = Fraction(0), True, None, False
    for atom in guard.conjuncts:
        c = atom.const - values[atom.clock]
        if atom.op in ("<", "<="):
            strict = atom.op == "<"
            if hi is None or c < hi or (c == hi and strict):
                hi, hi_strict = c, strict
        else:
            strict = atom.op == ">"
            if c > lo or (c == lo and strict):
                lo, lo_strict = c, strict
    if hi is not None and (hi < lo or (hi == lo and (lo_strict or hi_strict))):
        return None
    return lo, lo_strict, hi, hi_strict


def _dwell_candidates(iv) -> list[Fraction]:
    lo, lo_strict, hi, hi_strict = iv
    quarter = Fraction(1, 4)
    cands = []
    if hi is None:
        cands += [lo + quarter, lo + 1, lo + Fraction(5, 2)]
    else:
        cands += [(lo + hi) / 2, lo + quarter, hi - quarter]
    if not lo_strict:
        cands.append(lo)
    if hi is not None and not hi_strict:
        cands.append(hi)

    def inside(d):
        if d < lo or (d == lo and lo_strict) or d <= 0:
            return False
        return hi is None or d < hi or (d == hi and not hi_strict)

    return sorted({d for d in cands if inside(d)})


def _co_reachable(ta: TimedAutomaton) -> set:
    good = set(ta.accepting)
    changed = True
    while changed:
        changed = False
        for tr in ta.transitions:
            if tr.target in good and tr.source not in good:
                good.add(tr.source)
                changed = True
    return good


def sample_accepted_word(ta: TimedAutomaton, rng: random.Random, max_len: int = 8, attempts: int = 30) -> TimedWord | None:
    """Random walk along transitions, choosing dwell times at midpoints and next to guard bounds.

    Returns an accepted timed word, or None if no attempt reached an accepting state.
    """
    good = _co_reachable(ta)
    if ta.initial not in good:
        return None
    for _ in range(attempts):
        state = ta.initial
        values = {x: Fraction(0) for x in ta.clocks}
        t = Fraction(0)
        events = []
        for _step in range(max_len):
            options = []
            for tr in ta.transitions:
                if tr.source != state or tr.target not in good:
                    continue
                iv = _dwell_interval(tr.guard, values)
                if iv is None:
                    continue
                for d in _dwell_candidates(iv):
                    options.append((tr, d))
            if not options:
                break
            tr, d = rng.choice(options)
            t += d
            values = {x: (Fraction(0) if x in tr.resets else v + d) for x, v in values.items()}
            state = tr.target
            events.append((tr.label, t))
            if state in ta.accepting and rng.random() < 0.5:
                break
        if events and state in ta.accepting:
            w = TimedWord(tuple((a, float(ts)) for a, ts in events))
            assert ta_accepts(ta, w)
            return w
    return None


# ---------------------------------------------------------------------------
# checking drivers


@dataclass
class SuiteReport:
    name: str
    trials: int = 0
    violations: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def record(self, instance) -> None:
        self.violations += 1
        if len(self.counterexamples) < 5:
            self.counterexamples.append(instance)

    def line(self) -> str:
        return f"{self.name}\ttrials={self.trials}\tviolations={self.violations}"


def masked_in(w: Word, out: Sequence[str]) -> set[int]:
    return {k + 1 for k, b in enumerate(out) if b == BOTTOM}


def soundness_suite(seed: int, trials: int, max_len: int = 50, buffers: Iterable[int] = range(1, 7)) -> SuiteReport:
    """No event inside a match is ever masked by the untimed filter."""
    rng = random.Random(seed)
    buffers = tuple(buffers)
    rep = SuiteReport("soundness")
    for _ in range(trials):
        nfa = random_nfa(rng)
        N = rng.choice(buffers)
        w = random_word(rng, nfa.alphabet.symbols, rng.randint(0, max_len))
        f = build_untimed_filter(nfa, N)
        out = filter_word(f, w)
        lost = untimed_match_set(w, nfa).covered() & masked_in(w, out)
        rep.trials += 1
        if lost:
            rep.record({"nfa": nfa, "N": N, "word": "".join(w), "lost": sorted(lost)})
    return rep


def completeness_suite(seed: int, trials: int, max_len: int = 20) -> SuiteReport:
    """For finite languages with N at least the longest accepted word: passed iff inside a match.

    The filter is built from the trimmed automaton; dead-end branches would
    otherwise let runs survive ``N`` steps without ever matching.
    """
    rng = random.Random(seed)
    rep = SuiteReport("completeness")
    while rep.trials < trials:
        nfa = trim(random_finite_nfa(rng))
        longest = longest_accepted_length(nfa)
        if longest is None:
            continue
        N = max(1, longest) + rng.randint(0, 2)
        w = random_word(rng, nfa.alphabet.symbols, rng.randint(0, max_len))
        out = filter_word(build_untimed_filter(nfa, N), w)
        passed = {k + 1 for k, b in enumerate(out) if b != BOTTOM}
        covered = untimed_match_set(w, nfa).covered()
        rep.trials += 1
        if passed != covered:
            rep.record({"nfa": nfa, "N": N, "word": "".join(w), "passed": sorted(passed), "covered": sorted(covered)})
    return rep


def monotonicity_suite(seed: int, trials: int, max_len: int = 30) -> SuiteReport:
    """Masked with buffer N implies masked with buffer nN."""
    rng = random.Random(seed)
    rep = SuiteReport("monotonicity")
    for _ in range(trials):
        nfa = random_nfa(rng)
        N = rng.choice((1, 2, 3))
        n = rng.choice((2, 3))
        w = random_word(rng, nfa.alphabet.symbols, rng.randint(0, max_len))
        small = masked_in(w, filter_word(LazyUntimedFilter(nfa, N), w))
        large = masked_in(w, filter_word(LazyUntimedFilter(nfa, n * N), w))
        rep.trials += 1
        if not small <= large:
            rep.record({"nfa": nfa, "N": N, "n": n, "word": "".join(w), "unmasked": sorted(small - large)})
    return rep


def _timed_instance_word(rng: random.Random, ta: TimedAutomaton, length: int) -> TimedWord:
    """Random events with accepted samples spliced in, so that matches actually occur."""
    t = 0.0
    events = []
    while len(events) < length:
        sample = sample_accepted_word(ta, rng) if rng.random() < 0.3 else None
        if sample is not None and len(events) + len(sample) <= length:
            base = t
            events.extend((a, base + ts) for a, ts in sample.events)
            t = events[-1][1]
        else:
            t += rng.randint(1, 8) / 4
            events.append((rng.choice(ta.alphabet.symbols), t))
    return TimedWord(tuple(events))


def timed_soundness_suite(seed: int, trials: int, max_len: int = 30, buffers: Iterable[int] = (2, 5)) -> SuiteReport:
    """No event inside an index match is masked by the timed filter."""
    rng = random.Random(seed)
    buffers = tuple(buffers)
    rep = SuiteReport("timed-soundness")
    for _ in range(trials):
        ta = random_ta(rng)
        N = rng.choice(buffers)
        w = _timed_instance_word(rng, ta, rng.randint(0, max_len))
        verdicts = filter_timed_word(build_timed_filter(ta, N, lazy=True), w).verdicts
        masked = {k + 1 for k, v in enumerate(verdicts) if v == MASK}
        lost = timed_index_match(w, ta).covered() & masked
        rep.trials += 1
        if lost:
            rep.record({"ta": ta, "N": N, "word": w, "lost": sorted(lost)})
    return rep


def inclusion_suite(seed: int, trials: int, samples: int = 200) -> SuiteReport:
    """Every sampled accepted word of a random TA is accepted by its one-clock determinization.

    ``trials`` counts automata; random automata with no sampleable accepted
    word are redrawn. The report counts checked words.
    """
    rng = random.Random(seed)
    rep = SuiteReport("inclusion")
    automata = 0
    while automata < trials:
        ta = random_ta(rng)
        first = sample_accepted_word(ta, rng)
        if first is None:
            continue
        automata += 1
        det = one_clock_determinize(ta)
        words = [first]
        while len(words) < samples:
            w = sample_accepted_word(ta, rng)
            if w is not None:
                words.append(w)
        for w in words:
            rep.trials += 1
            if not det.accepts(w):
                rep.record({"ta": ta, "word": w})
    return rep


LEMMA1_PATTERNS = {
    "aab": pattern_aab,
    "ab-loop": lambda: Nfa(
        Alphabet(("a", "b")),
        ("p", "q"),
        "p",
        {"q"},
        {("p", "a", "q"), ("q", "b", "p"), ("p", "a", "p")},
    ),
    "bxb": lambda: Nfa(
        Alphabet(("a", "b", "c")),
        ("r0", "r1", "r2", "r3"),
        "r0",
        {"r3", "r1"},
        {("r0", "b", "r1"), ("r1", "a", "r2"), ("r1", "c", "r2"), ("r2", "b", "r3"), ("r3", "c", "r3")},
    ),
}


def _lemma1_check(rep: SuiteReport, nfa: Nfa, name: str, N: int, w: Sequence[str], f=None) -> None:
    f = f or build_untimed_filter(nfa, N)
    out = filter_word(f, w)
    for k in range(1, len(w) + 1):
        rep.trials += 1
        if (out[k - 1] == BOTTOM) != lemma1_mask_oracle(w, nfa, N, k):
            rep.record({"pattern": name, "N": N, "word": "".join(w), "k": k})


def lemma1_exhaustive(max_len: int = 7, buffers: Iterable[int] = (1, 2, 3)) -> SuiteReport:
    """Per-character agreement of the filter with the characterization, over all short words."""
    rep = SuiteReport("lemma1")
    for name, make in LEMMA1_PATTERNS.items():
        nfa = make()
        for N in buffers:
            f = build_untimed_filter(nfa, N)
            for length in range(max_len + 1):
                for w in itertools.product(nfa.alphabet.symbols, repeat=length):
                    _lemma1_check(rep, nfa, name, N, w, f)
    return rep


def lemma1_suite(seed: int, trials: int, max_len: int = 7) -> SuiteReport:
    """Random instances of the same agreement check (one trial per checked position)."""
    rng = random.Random(seed)
    rep = SuiteReport("lemma1")
    for _ in range(trials):
        nfa = random_nfa(rng)
        N = rng.choice((1, 2, 3))
        w = random_word(rng, nfa.alphabet.symbols, rng.randint(1, max_len))
        _lemma1_check(rep, nfa, "random", N, w)
    return rep


SUITES = {
    "soundness": soundness_suite,
    "completeness": completeness_suite,
    "monotonicity": monotonicity_suite,
    "timed-soundness": timed_soundness_suite,
    "lemma1": lemma1_suite,
    "inclusion": inclusion_suite,
}
