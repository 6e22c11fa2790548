"""seatcheck: resource-annotated topological evidence models.

Construct and validate annotated spaces, evaluate the evidence logics over
them, compute resource-indexed epistemic operators, classify structures,
test axiom-scheme validity, and check bisimulations.
"""

from .bisim import (BisimRelation, BisimReport, check_bisim, disjoint_union,
                    largest_bisim, modal_equiv_test)
from .classify import (AxiomScheme, SeatClassReport, characterization_crosscheck,
                       check_scheme, classify, probe_elements, random_seat, scheme,
                       suite_schemes)
from .errors import (BudgetError, EvaluationError, GenerationError, ParseError,
                     SeatcheckError, StructuralError, UnsupportedOperationError)
from .formula import (Formula, enumerate_formulas, expand, is_global_free,
                      modal_depth, parse, parse_lines, print_formula)
from .seat import CostResult, Model, Seat, check_conditions, minimal_seat, seat_close
from .semantics import (Evaluator, Extent, OperatorTables, a_dense, bel, evaluate,
                        for_op, int_op, kn)
from .semiring import (INF, FiniteIdeal, FiniteSemiring, LawViolation,
                       Semiring, ThresholdIdeal, boolean_semiring, chain_semiring,
                       empty_ideal, finite_semiring, gf2, ideal_close, ideal_combine,
                       ideal_is_empty, ideal_is_improper, ideal_is_strong, ideal_join,
                       ideal_member, ideal_subset, ideal_union, leq_add, leq_left,
                       leq_right, min_plus_rat, powerset_lattice, powerset_union,
                       saturating_nat, tropical_nat, verify_laws)
from .topology import FiniteTopology, generate, interior, is_dense

__version__ = "0.1.0"
