"""A small deterministic CDCL solver.

Two-literal watching, first-UIP learning, ascending variable order with
phase saving, no restarts.  The solver keeps a *base* CNF around and every
``solve`` call answers ``base AND extra`` from scratch: the extra clauses
and every clause learned during the call are dropped when it returns.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

Model = List[bool]  # index v (1-based) -> value; index 0 unused


def _to_internal(clause: Iterable[int]) -> Optional[List[int]]:
    """DIMACS ints -> internal literals (2v, 2v+1); None for tautologies."""
    out: List[int] = []
    seen = set()
    for x in clause:
        if x == 0:
            raise ValueError("0 is not a literal")
        lit = 2 * x if x > 0 else -2 * x + 1
        if lit ^ 1 in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return out


class CdclSolver:
    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]] = ()):
        self.base_vars = num_vars
        self.clauses: List[List[int]] = []
        self.watches: List[List[int]] = [[] for _ in range(2 * num_vars + 2)]
        self.base_units: List[int] = []
        self.base_empty = False
        self.phase = [False] * (num_vars + 1)
        for c in clauses:
            lits = _to_internal(c)
            if lits is None:
                continue
            self._check_range(lits, num_vars)
            if not lits:
                self.base_empty = True
            elif len(lits) == 1:
                self.base_units.append(lits[0])
            else:
                self.watches[lits[0]].append(len(self.clauses))
                self.watches[lits[1]].append(len(self.clauses))
                self.clauses.append(lits)
        self.n_base = len(self.clauses)

    @staticmethod
    def _check_range(lits, num_vars):
        for lit in lits:
            if (lit >> 1) > num_vars:
                raise ValueError(f"variable {lit >> 1} exceeds declared count {num_vars}")

    # -- public -----------------------------------------------------------

    def solve(self, extra: Iterable[Sequence[int]] = (), num_vars: Optional[int] = None) -> Optional[Model]:
        """Return a model of base AND extra over ``num_vars`` variables, or None."""
        nv = self.base_vars if num_vars is None else max(num_vars, self.base_vars)
        grown = nv - self.base_vars
        if grown:
            self.watches.extend([] for _ in range(2 * grown))
            self.phase.extend([False] * grown)
        touched = set()
        try:
            return self._search(nv, extra, touched)
        finally:
            del self.clauses[self.n_base:]
            n_base = self.n_base
            for lit in touched:
                if lit < len(self.watches):
                    self.watches[lit] = [ci for ci in self.watches[lit] if ci < n_base]
            if grown:
                del self.watches[2 * self.base_vars + 2:]
                del self.phase[self.base_vars + 1:]

    # -- internals ----------------------------------------------------------

    def _search(self, nv: int, extra, touched) -> Optional[Model]:
        if self.base_empty:
            return None
        clauses = self.clauses
        watches = self.watches
        units = list(self.base_units)
        for c in extra:
            lits = _to_internal(c)
            if lits is None:
                continue
            self._check_range(lits, nv)
            if not lits:
                return None
            if len(lits) == 1:
                units.append(lits[0])
                continue
            ci = len(clauses)
            clauses.append(lits)
            watches[lits[0]].append(ci)
            watches[lits[1]].append(ci)
            touched.add(lits[0])
            touched.add(lits[1])

        val = [-1] * (2 * nv + 2)
        level = [0] * (nv + 1)
        reason = [-1] * (nv + 1)
        seen = [False] * (nv + 1)
        phase = self.phase
        trail: List[int] = []
        trail_lim: List[int] = []

        def enqueue(lit: int, why: int) -> bool:
            v = val[lit]
            if v == 1:
                return True
            if v == 0:
                return False
            val[lit] = 1
            val[lit ^ 1] = 0
            var = lit >> 1
            level[var] = len(trail_lim)
            reason[var] = why
            trail.append(lit)
            return True

        qhead = 0

        def propagate() -> int:
            nonlocal qhead
            while qhead < len(trail):
                p = trail[qhead]
                qhead += 1
                false_lit = p ^ 1
                ws = watches[false_lit]
                i = j = 0
                end = len(ws)
                while i < end:
                    ci = ws[i]
                    i += 1
                    c = clauses[ci]
                    if c[0] == false_lit:
                        c[0] = c[1]
                        c[1] = false_lit
                    first = c[0]
                    if val[first] == 1:
                        ws[j] = ci
                        j += 1
                        continue
                    found = False
                    for k in range(2, len(c)):
                        lk = c[k]
                        if val[lk] != 0:
                            c[1] = lk
                            c[k] = false_lit
                            watches[lk].append(ci)
                            if ci >= self.n_base:
                                touched.add(lk)
                            found = True
                            break
                    if found:
                        continue
                    ws[j] = ci
                    j += 1
                    if val[first] == 0:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        qhead = len(trail)
                        return ci
                    val[first] = 1
                    val[first ^ 1] = 0
                    var = first >> 1
                    level[var] = len(trail_lim)
                    reason[var] = ci
                    trail.append(first)
                del ws[j:]
            return -1

        for lit in units:
            if not enqueue(lit, -1):
                return None
        if propagate() >= 0:
            return None

        next_var = 1

        def backtrack(to_level: int) -> None:
            nonlocal qhead, next_var
            if len(trail_lim) <= to_level:
                return
            stop = trail_lim[to_level]
            for idx in range(len(trail) - 1, stop - 1, -1):
                lit = trail[idx]
                var = lit >> 1
                val[lit] = -1
                val[lit ^ 1] = -1
                reason[var] = -1
                phase[var] = (lit & 1) == 0
                if var < next_var:
                    next_var = var
            del trail[stop:]
            del trail_lim[to_level:]
            qhead = len(trail)

        while True:
            confl = propagate()
            if confl >= 0:
                cur = len(trail_lim)
                if cur == 0:
                    return None
                learnt = [0]
                counter = 0
                p = -1
                idx = len(trail) - 1
                c = clauses[confl]
                start = 0
                while True:
                    for k in range(start, len(c)):
                        q = c[k]
                        var = q >> 1
                        if not seen[var] and level[var] > 0:
                            seen[var] = True
                            if level[var] >= cur:
                                counter += 1
                            else:
                                learnt.append(q)
                    while not seen[trail[idx] >> 1]:
                        idx -= 1
                    p = trail[idx]
                    idx -= 1
                    var = p >> 1
                    seen[var] = False
                    counter -= 1
                    if counter == 0:
                        break
                    c = clauses[reason[var]]
                    start = 1
                learnt[0] = p ^ 1
                for q in learnt[1:]:
                    seen[q >> 1] = False
                if len(learnt) == 1:
                    backtrack(0)
                    enqueue(learnt[0], -1)
                else:
                    best = 1
                    for k in range(2, len(learnt)):
                        if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                            best = k
                    learnt[1], learnt[best] = learnt[best], learnt[1]
                    backtrack(level[learnt[1] >> 1])
                    ci = len(clauses)
                    clauses.append(learnt)
                    watches[learnt[0]].append(ci)
                    watches[learnt[1]].append(ci)
                    touched.add(learnt[0])
                    touched.add(learnt[1])
                    enqueue(learnt[0], ci)
                continue

            while next_var <= nv and val[2 * next_var] != -1:
                next_var += 1
            if next_var > nv:
                model = [False] * (nv + 1)
                for v in range(1, nv + 1):
                    model[v] = val[2 * v] == 1
                return model
            trail_lim.append(len(trail))
            var = next_var
            enqueue(2 * var if phase[var] else 2 * var + 1, -1)


def solve_cnf(num_vars: int, clauses: Iterable[Sequence[int]]) -> Optional[Model]:
    """One-shot convenience wrapper."""
    return CdclSolver(num_vars, clauses).solve()
