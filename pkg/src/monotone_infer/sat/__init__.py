from .cnf import CnfEncoder, encode_cnf
from .dimacs import ExternalBackend, parse_dimacs, parse_solver_output, to_dimacs
from .queries import (DEFAULT_BACKEND, BuiltinBackend, QueryCounter, SatOracle, bmc_reach_formula, check_inductive,
                      formula_oracle, is_sat, reach_oracle, solve, unroll)
from .solver import CdclSolver, solve_cnf
