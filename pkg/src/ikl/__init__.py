"""Incremental learning of deterministic k-bit Kripke structures.

The pipeline learns a black-box system as one DFA per output bit (with lazy,
shared partition refinement), reassembles the family into a single structure
via the subdirect product, minimises it, and model-checks the result inside a
learning-based testing loop that drives the system with counterexamples.
"""

from .automata import (EPSILON, Bits, InputAlphabet, KripkeStructure, Word,
                       behaviourally_equivalent, equivalence_witness,
                       prefix_closure, prefixes, random_kripke)
from .checker import (Requirement, Verdict, check, parse_requirement,
                      unparse_requirement, violated_by_trace)
from .errors import IklError, InputError, TeacherError
from .fid import DfaFamily, FidLearner, fid_init, fid_process
from .fileio import format_kripke, load_kripke, parse_kripke, save_kripke
from .idlearn import DEAD, IdTables, f_concat, id_learn, quotient_synthesize
from .lbt import (BudgetExhausted, ConvergedNoViolation, IterationRecord,
                  LbtConfig, LbtReport, TrueNegativeFound, lbt_run,
                  n_equivalence_converged, next_random_query)
from .minimize import (MinimizeResult, Partition, minimise, nerode_bruteforce,
                       quotient)
from .product import projection_of_product, subdirect_product
from .teacher import (CachedTeacher, ExternalTeacher, KripkeTeacher, Teacher,
                      serve_kripke)

__version__ = "0.1.0"

__all__ = [
    "EPSILON", "Bits", "InputAlphabet", "KripkeStructure", "Word",
    "behaviourally_equivalent", "equivalence_witness", "prefix_closure",
    "prefixes", "random_kripke",
    "Requirement", "Verdict", "check", "parse_requirement",
    "unparse_requirement", "violated_by_trace",
    "IklError", "InputError", "TeacherError",
    "DfaFamily", "FidLearner", "fid_init", "fid_process",
    "format_kripke", "load_kripke", "parse_kripke", "save_kripke",
    "DEAD", "IdTables", "f_concat", "id_learn", "quotient_synthesize",
    "BudgetExhausted", "ConvergedNoViolation", "IterationRecord", "LbtConfig",
    "LbtReport", "TrueNegativeFound", "lbt_run", "n_equivalence_converged",
    "next_random_query",
    "MinimizeResult", "Partition", "minimise", "nerode_bruteforce", "quotient",
    "projection_of_product", "subdirect_product",
    "CachedTeacher", "ExternalTeacher", "KripkeTeacher", "Teacher",
    "serve_kripke",
]
