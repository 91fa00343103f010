"""Moore-machine filters that mask events which cannot take part in a pattern match.

Untimed patterns are NFAs, timed patterns are timed automata. A filter with
buffer size ``N`` reads a (timed) word and outputs it delayed by ``N``
events, replacing events that provably lie outside every match by the
masking symbol.
"""

from .automata import BOTTOM, Alphabet, InputError, Nfa, TaTransition, TimedAutomaton, TimedWord
from .oneclock import determinize_rta, one_clock_determinize, ta_to_rta
from .timed import apply_mask, build_counter_ta, build_timed_filter, filter_timed_word, suppress_runs
from .untimed import LazyUntimedFilter, build_untimed_filter, filter_word, filter_word_otf

__version__ = "0.1.0"
