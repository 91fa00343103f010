"""Plain-text formats for pattern automata and (timed) words.

Automaton files are line based::

    # b within 2 time units after a
    kind ta
    alphabet a b
    states s0 s1 s2
    initial s0
    accepting s2
    clocks x
    trans s0 a s1 reset=x
    trans s1 b s2 guard=x<2

Word files hold one event per line, ``label<TAB>timestamp`` for timed words
or just ``label`` for untimed ones. ``#`` starts a comment and the masking
symbol is written ``_``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

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
)

WIRE_BOTTOM = "_"

_ATOM = re.compile(r"^\s*([A-Za-z_][\w']*)\s*(<=|>=|<|>)\s*(\d+)\s*$")
_NAME = re.compile(r"^[^\s#=]+$")


class FormatError(ValueError):
    """Malformed automaton or word file."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _names(tokens: list[str], lineno: int, what: str) -> list[str]:
    for t in tokens:
        if not _NAME.match(t) or t == WIRE_BOTTOM:
            raise FormatError(f"bad {what} name {t!r}", lineno)
    return tokens


def parse_guard(text: str, lineno: int | None = None) -> ClockConstraint:
    """``true`` or atoms ``clock REL int`` joined by ``&&``."""
    text = text.strip()
    if text in ("", "true"):
        return ClockConstraint()
    atoms = []
    for part in text.split("&&"):
        m = _ATOM.match(part)
        if not m:
            raise FormatError(f"bad guard atom {part.strip()!r}", lineno)
        atoms.append(Atom(m.group(1), m.group(2), int(m.group(3))))
    return ClockConstraint(tuple(atoms))


def parse_automaton(text: str) -> Nfa | TimedAutomaton:
    fields: dict[str, list[str]] = {}
    trans: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        key, *rest = line.split()
        if key == "trans":
            trans.append((lineno, rest))
        elif key in ("kind", "alphabet", "states", "initial", "accepting", "clocks"):
            if key in fields:
                raise FormatError(f"duplicate {key!r} declaration", lineno)
            fields[key] = _names(rest, lineno, key) if key != "kind" else rest
        else:
            raise FormatError(f"unknown directive {key!r}", lineno)

    kind = fields.get("kind", [None])
    if len(kind) != 1 or kind[0] not in ("nfa", "ta"):
        raise FormatError("expected 'kind nfa' or 'kind ta'")
    kind = kind[0]
    for key in ("alphabet", "states", "initial"):
        if key not in fields:
            raise FormatError(f"missing {key!r} declaration")
    if len(fields["initial"]) != 1:
        raise FormatError("exactly one initial state is required")
    if kind == "nfa" and fields.get("clocks"):
        raise FormatError("an NFA declares no clocks")

    states = fields["states"]
    known = set(states)
    clocks = fields.get("clocks", [])
    edges = []
    for lineno, parts in trans:
        if len(parts) < 3:
            raise FormatError("expected 'trans SRC LABEL DST [guard=...] [reset=...]'", lineno)
        src, label, dst, *opts = parts
        for s in (src, dst):
            if s not in known:
                raise FormatError(f"undeclared state {s!r}", lineno)
        guard, resets = ClockConstraint(), frozenset()
        for opt in opts:
            name, eq, value = opt.partition("=")
            if not eq or name not in ("guard", "reset") or kind == "nfa":
                raise FormatError(f"unexpected transition field {opt!r}", lineno)
            try:
                if name == "guard":
                    guard = parse_guard(value, lineno)
                else:
                    resets = frozenset(v for v in value.split(",") if v)
            except InputError as exc:
                raise FormatError(str(exc), lineno) from None
        undeclared = (guard.clocks | resets) - set(clocks)
        if undeclared:
            raise FormatError(f"undeclared clocks {sorted(undeclared)}", lineno)
        edges.append((src, label, dst, guard, resets))

    try:
        alphabet = Alphabet(tuple(fields["alphabet"]))
        if kind == "nfa":
            return Nfa(alphabet, states, fields["initial"][0], fields.get("accepting", []), {e[:3] for e in edges})
        ta_edges = tuple(TaTransition(s, d, a, r, g) for s, a, d, g, r in edges)
        return TimedAutomaton(alphabet, states, fields["initial"][0], fields.get("accepting", []), clocks, ta_edges)
    except InputError as exc:
        raise FormatError(str(exc)) from None


def format_automaton(a: Nfa | TimedAutomaton) -> str:
    timed = isinstance(a, TimedAutomaton)
    lines = [
        f"kind {'ta' if timed else 'nfa'}",
        "alphabet " + " ".join(a.alphabet.symbols),
        "states " + " ".join(map(str, a.states)),
        f"initial {a.initial}",
        "accepting " + " ".join(str(s) for s in a.states if s in a.accepting),
    ]
    if timed:
        lines.append("clocks " + " ".join(a.clocks))
        for tr in a.transitions:
            line = f"trans {tr.source} {tr.label} {tr.target}"
            if tr.guard.conjuncts:
                line += " guard=" + "&&".join(map(str, tr.guard.conjuncts))
            if tr.resets:
                line += " reset=" + ",".join(sorted(tr.resets))
            lines.append(line)
    else:
        order = {s: k for k, s in enumerate(a.states)}
        for src, label, dst in sorted(a.transitions, key=lambda t: (order[t[0]], t[1], order[t[2]])):
            lines.append(f"trans {src} {label} {dst}")
    return "\n".join(lines) + "\n"


def load_automaton(path: str) -> Nfa | TimedAutomaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())


# ---------------------------------------------------------------------------
# words


def decode_label(token: str) -> str:
    return BOTTOM if token == WIRE_BOTTOM else token


def encode_label(label: str) -> str:
    return WIRE_BOTTOM if label == BOTTOM else label


@dataclass(frozen=True)
class Event:
    label: str
    time: float | None  # None for untimed words
    text: str | None = None  # timestamp as written, echoed back unchanged

    def as_pair(self) -> tuple[str, float]:
        return self.label, self.time


def iter_events(lines: Iterable[str], timed: bool) -> Iterator[Event]:
    """Parse events lazily, checking the format and timestamp order as they arrive."""
    prev = 0.0
    first = True
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if timed:
            if len(parts) != 2:
                raise FormatError("expected 'label<TAB>timestamp'", lineno)
            label, stamp = parts[0].strip(), parts[1].strip()
            try:
                t = float(stamp)
            except ValueError:
                raise FormatError(f"bad timestamp {stamp!r}", lineno) from None
            if t != t or t in (float("inf"), float("-inf")):
                raise FormatError(f"bad timestamp {stamp!r}", lineno)
            if (first and t <= 0) or (not first and t <= prev):
                raise FormatError(f"timestamps must be positive and strictly increasing ({stamp})", lineno)
            prev, first = t, False
            yield Event(decode_label(label), t, stamp)
        else:
            if len(parts) != 1:
                raise FormatError("expected a single label per line", lineno)
            yield Event(decode_label(parts[0]), None)


def parse_word(text: str) -> list[str]:
    return [e.label for e in iter_events(text.splitlines(), timed=False)]


def parse_timed_word(text: str) -> TimedWord:
    return TimedWord(tuple(e.as_pair() for e in iter_events(text.splitlines(), timed=True)))


def format_event(label: str, time: float | None = None, text: str | None = None) -> str:
    if time is None:
        return encode_label(label)
    return f"{encode_label(label)}\t{text if text is not None else repr(float(time))}"


def format_word(w: Iterable[str]) -> str:
    return "".join(encode_label(a) + "\n" for a in w)


def format_timed_word(w: TimedWord) -> str:
    return "".join(format_event(a, t) + "\n" for a, t in w.events)


def check_labels(events: Iterable[Event], alphabet: Alphabet, allow_bottom: bool = False) -> Iterator[Event]:
    """Pass events through, raising :class:`InputError` on labels outside the alphabet."""
    for e in events:
        if e.label == BOTTOM and allow_bottom:
            yield e
            continue
        if e.label not in alphabet:
            raise InputError(f"unknown label {encode_label(e.label)!r}")
        yield e


def write_stats(fh: TextIO, stats: dict) -> None:
    for key, value in stats.items():
        if isinstance(value, float):
            value = f"{value:.6f}"
        fh.write(f"{key}\t{value}\n")
