"""Symmetric rewriting machines on group words, the group presentations they
define, van Kampen diagram construction and verification, and the boundary
invariants used to reason about them."""

from .words import (Letter, Word, Hardware, Slot, AdmissibleWord,
                    NotAdmissible, NonInjectiveMap, free_reduce, winv,
                    is_reduced, y_length, copy_word, is_faulty_base,
                    is_tight_base, format_word)
from .machine import (Rule, RulePart, SMachine, Computation, Parameters,
                      DomainViolation, StuckAt, run_history, is_eligible,
                      enumerate_computations, step_history, check_parameters,
                      emit_machine, load_machine)
from . import zoo

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
