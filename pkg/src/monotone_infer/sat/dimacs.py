"""DIMACS CNF I/O and an external-solver backend speaking it."""

from __future__ import annotations

import subprocess
from typing import Iterable, List, Optional, Sequence


def to_dimacs(num_vars: int, clauses: Sequence[Sequence[int]]) -> str:
    lines = [f"p cnf {num_vars} {len(clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str):
    num_vars = None
    clauses: List[List[int]] = []
    cur: List[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(x)
    if cur:
        clauses.append(cur)
    if num_vars is None:
        raise ValueError("missing problem line")
    return num_vars, clauses


def parse_solver_output(text: str, num_vars: int) -> Optional[List[bool]]:
    """Read ``s SAT``/``SAT`` / ``UNSAT`` and ``v`` lines into a 1-based model list."""
    status = None
    model = [False] * (num_vars + 1)
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        words = line.split()
        if words[0] == "s":
            words = words[1:]
        head = words[0].upper() if words else ""
        if head in ("SAT", "SATISFIABLE"):
            status = True
        elif head in ("UNSAT", "UNSATISFIABLE"):
            status = False
        elif head == "V":
            for tok in words[1:]:
                x = int(tok)
                if x != 0 and abs(x) <= num_vars:
                    model[abs(x)] = x > 0
    if status is None:
        raise RuntimeError("solver output has no SAT/UNSAT verdict")
    return model if status else None


class ExternalBackend:
    """Runs ``command`` once per query, feeding DIMACS on stdin."""

    def __init__(self, command: Sequence[str], timeout: Optional[float] = None):
        self.command = list(command)
        self.timeout = timeout

    def session(self, num_vars: int, clauses):
        return _ExternalSession(self, num_vars, [list(c) for c in clauses])

    def run(self, num_vars: int, clauses: Sequence[Sequence[int]]) -> Optional[List[bool]]:
        proc = subprocess.run(self.command, input=to_dimacs(num_vars, clauses), capture_output=True,
                              text=True, timeout=self.timeout)
        return parse_solver_output(proc.stdout, num_vars)


class _ExternalSession:
    def __init__(self, backend: ExternalBackend, num_vars: int, clauses):
        self.backend = backend
        self.num_vars = num_vars
        self.clauses = clauses

    def solve(self, extra: Iterable[Sequence[int]] = (), num_vars: Optional[int] = None):
        nv = max(self.num_vars, num_vars or 0)
        return self.backend.run(nv, self.clauses + [list(c) for c in extra])


def main() -> None:
    """Minimal DIMACS solver front end over the built-in CDCL solver."""
    import sys

    from .solver import solve_cnf

    num_vars, clauses = parse_dimacs(sys.stdin.read())
    model = solve_cnf(num_vars, clauses)
    if model is None:
        print("s UNSAT")
        return
    print("s SAT")
    print("v " + " ".join(str(v if model[v] else -v) for v in range(1, num_vars + 1)) + " 0")


if __name__ == "__main__":
    main()
