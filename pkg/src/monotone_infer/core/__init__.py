from .dtree import (DecisionTree, Leaf, Node, check_tree, dt_to_cnf, dt_to_dnf, format_tree, random_tree, size,
                    tree_eval, tree_formula)
from .logic import (FALSE, TRUE, And, Atom, Clause, ClauseList, Const, Cube, Formula, Iff, InconsistentCubeError,
                    Literal, LogicError, MissingVariableError, Not, Or, State, TermList, Var, Xor, atom, cnf_formula,
                    conj, copies, disj, dnf_formula, equal_states, evaluate, iff, lit_formula, neg, normalize_clauses,
                    normalize_terms, prime, prune_subsumed, rename_copies, state_of, substitute, two_vocabulary,
                    unprime, variables, vocabulary, xor)
from .system import (FormatError, TransitionSystem, cube_from_formula, format_formula, format_system, parse_basis,
                     parse_cube, parse_formula, parse_system, parse_tree)
