"""Weighted context-free grammar constraint engine.

Domain-consistent propagation for the weighted grammar constraint, an
equivalent decomposition into primitive arithmetic constraints, soft
grammar constraints under Hamming and edit distance, and a small
branch-and-bound solver with a shift-scheduling model.
"""

from .grammar import (Production, Restriction, SymbolTable, WeightedGrammar,
                      binary, epsilon, ext_left, ext_right, normalize,
                      terminal, validate)
from .propagator import (INFEASIBLE, Chart, DomainStore, Infeasible, Pruned,
                         downward_pass, propagate, prune_domains, upward_pass)
from .decomposition import (build_dag, entailment_skip, fixpoint, post_network,
                            schedule_order)
from .soft import edit_encoding, hamming_encoding, propagate_epsilon
from .solver import (BACKENDS, Model, SolveResult, Solution, channel,
                     post_demand, post_wcfg, solve_min)
from .scheduling import (ScheduleInstance, build_schedule_grammar,
                         build_schedule_model, solve_instance)

__version__ = "0.1.0"
