"""Definitional (Tseitin-style) CNF encoding of formulas."""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..core.logic import And, Atom, Const, Cube, Formula, Iff, Not, Or, Var, Xor


class CnfEncoder:
    """Allocates solver variables for formula variables and subformulas.

    A child encoder (``parent`` given) shares the parent's numbering and
    definitions read-only and allocates fresh variables above it, so a base
    encoding can be reused across many queries.
    """

    def __init__(self, parent: Optional["CnfEncoder"] = None):
        self.parent = parent
        self.var_ids: Dict[Var, int] = {}
        self._defs: Dict[int, int] = {}
        self._keep: List[Formula] = []
        self.clauses: List[List[int]] = []
        self.num_vars = parent.num_vars if parent else 0
        self._true: Optional[int] = None

    def _fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def var(self, v: Var) -> int:
        enc = self
        while enc is not None:
            hit = enc.var_ids.get(v)
            if hit is not None:
                return hit
            enc = enc.parent
        idx = self._fresh()
        self.var_ids[v] = idx
        return idx

    def all_var_ids(self) -> Dict[Var, int]:
        out = dict(self.parent.all_var_ids()) if self.parent else {}
        out.update(self.var_ids)
        return out

    def _lookup_def(self, f: Formula) -> Optional[int]:
        enc = self
        key = id(f)
        while enc is not None:
            hit = enc._defs.get(key)
            if hit is not None:
                return hit
            enc = enc.parent
        return None

    def _true_lit(self) -> int:
        enc = self
        while enc is not None:
            if enc._true is not None:
                return enc._true
            enc = enc.parent
        self._true = self._fresh()
        self.clauses.append([self._true])
        return self._true

    def lit(self, f: Formula) -> int:
        """Solver literal equivalent to ``f`` (adding defining clauses)."""
        if isinstance(f, Atom):
            return self.var(f.var)
        if isinstance(f, Not):
            return -self.lit(f.arg)
        if isinstance(f, Const):
            t = self._true_lit()
            return t if f.value else -t
        hit = self._lookup_def(f)
        if hit is not None:
            return hit
        cl = self.clauses
        if isinstance(f, (And, Or)):
            subs = [self.lit(a) for a in f.args]
            x = self._fresh()
            if isinstance(f, And):
                for s in subs:
                    cl.append([-x, s])
                cl.append([x] + [-s for s in subs])
            else:
                for s in subs:
                    cl.append([x, -s])
                cl.append([-x] + subs)
        elif isinstance(f, Xor):
            subs = [self.lit(a) for a in f.args]
            x = subs[0]
            for s in subs[1:]:
                y = self._fresh()
                cl.extend(([-y, x, s], [-y, -x, -s], [y, -x, s], [y, x, -s]))
                x = y
        elif isinstance(f, Iff):
            a, b = self.lit(f.left), self.lit(f.right)
            x = self._fresh()
            cl.extend(([-x, -a, b], [-x, a, -b], [x, a, b], [x, -a, -b]))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._defs[id(f)] = x
        self._keep.append(f)
        return x

    def assert_formula(self, f: Formula) -> None:
        """Add clauses forcing ``f`` true, emitting top-level structure directly."""
        if isinstance(f, And):
            for a in f.args:
                self.assert_formula(a)
        elif isinstance(f, Const):
            if not f.value:
                self.clauses.append([])
        elif isinstance(f, Or):
            self.clauses.append([self.lit(a) for a in f.args])
        elif isinstance(f, Not) and isinstance(f.arg, And):
            self.clauses.append([-self.lit(a) for a in f.arg.args])
        elif isinstance(f, Not) and isinstance(f.arg, Or):
            for a in f.arg.args:
                self.assert_formula(Not(a) if not isinstance(a, Not) else a.arg)
        elif isinstance(f, Not) and isinstance(f.arg, Not):
            self.assert_formula(f.arg.arg)
        else:
            self.clauses.append([self.lit(f)])

    def assert_cube(self, cube: Cube) -> None:
        for v, p in cube.polarity.items():
            x = self.var(v)
            self.clauses.append([x if p else -x])


def encode_cnf(f: Formula) -> Tuple[List[List[int]], Dict[Var, int]]:
    """Equisatisfiable CNF for ``f`` plus the map from formula variables to solver variables."""
    enc = CnfEncoder()
    enc.assert_formula(f)
    return enc.clauses, enc.all_var_ids()
