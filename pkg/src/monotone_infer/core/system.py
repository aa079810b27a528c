"""Transition systems and the s-expression text format.

    vars 3
    init (and (not p0) (not p1) (not p2))
    trans (or (and p0' p1') (iff p2' p2))
    bad (and p0 p1 p2)
    basis (and p0 p1 p2)      ; optional, repeatable

Atoms are ``p<i>`` and ``p<i>'``; connectives ``and or not xor iff``;
constants ``true``/``false``; ``;`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .dtree import DecisionTree, Leaf, Node, check_tree
from .logic import (And, Atom, Const, Cube, Formula, Iff, Literal, LogicError, Not, Or, Var, Xor, conj,
                    copies, disj, rename_copies)


class FormatError(LogicError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TransitionSystem:
    n: int
    init: Formula
    tr: Formula
    bad: Formula
    basis: Tuple[Cube, ...] = field(default=())

    def __post_init__(self):
        for name in ("init", "bad"):
            f = getattr(self, name)
            if copies(f) - {0}:
                raise LogicError(f"{name} may only mention unprimed variables")
        if copies(self.tr) - {0, 1}:
            raise LogicError("trans may only mention p and p' variables")
        from .logic import variables
        for f in (self.init, self.tr, self.bad):
            for v in variables(f):
                if v.index >= self.n:
                    raise LogicError(f"{v} outside vocabulary of {self.n} variables")
        for b in self.basis:
            for v in b.dom():
                if v.copy != 0 or v.index >= self.n:
                    raise LogicError(f"basis cube mentions {v}")

    def reversed(self) -> "TransitionSystem":
        """(Bad, tr^-1, Init): the dual system used for backwards reasoning."""
        return TransitionSystem(self.n, self.bad, rename_copies(self.tr, {0: 1, 1: 0}), self.init)


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[A-Za-z_][A-Za-z0-9_]*'?|\d+|.")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        s = m.group(0)
        col = m.start() - line_start + 1
        if s[0].isspace() or s[0] == ";":
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = m.start() + s.rfind("\n") + 1
            continue
        if not (s in "()" or s[0].isalnum() or s[0] == "_"):
            raise FormatError(f"unexpected character {s!r}", line, col)
        toks.append(_Tok(s, line, col))
    return toks


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", 1, 1)
            raise FormatError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise FormatError(f"expected {text!r}, got {tok.text!r}", tok.line, tok.col)
        return tok


_ATOM = re.compile(r"p(\d+)('?)$")
_NARY = {"and": conj, "or": disj}


def _read_formula(r: _Reader, n: Optional[int], allow_primed: bool) -> Formula:
    tok = r.next()
    if tok.text == "true":
        return Const(True)
    if tok.text == "false":
        return Const(False)
    m = _ATOM.match(tok.text)
    if m:
        idx, primed = int(m.group(1)), bool(m.group(2))
        if primed and not allow_primed:
            raise FormatError(f"primed variable {tok.text} not allowed here", tok.line, tok.col)
        if n is not None and idx >= n:
            raise FormatError(f"variable {tok.text} outside vocabulary of {n}", tok.line, tok.col)
        return Atom(Var(idx, 1 if primed else 0))
    if tok.text != "(":
        raise FormatError(f"unexpected token {tok.text!r}", tok.line, tok.col)
    head = r.next()
    args = []
    while r.peek() is not None and r.peek().text != ")":
        args.append(_read_formula(r, n, allow_primed))
    r.expect(")")
    op = head.text
    if op in _NARY:
        # keep explicit structure so printing round-trips
        if not args:
            return Const(op == "and")
        if len(args) == 1:
            return args[0]
        return And(tuple(args)) if op == "and" else Or(tuple(args))
    if op == "not":
        if len(args) != 1:
            raise FormatError("not takes one argument", head.line, head.col)
        return Not(args[0])
    if op == "xor":
        if len(args) < 2:
            raise FormatError("xor takes at least two arguments", head.line, head.col)
        return Xor(tuple(args))
    if op == "iff":
        if len(args) != 2:
            raise FormatError("iff takes two arguments", head.line, head.col)
        return Iff(args[0], args[1])
    raise FormatError(f"unknown connective {op!r}", head.line, head.col)


def parse_formula(text: str, n: Optional[int] = None, allow_primed: bool = True) -> Formula:
    r = _Reader(text)
    f = _read_formula(r, n, allow_primed)
    extra = r.peek()
    if extra is not None:
        raise FormatError(f"trailing input {extra.text!r}", extra.line, extra.col)
    return f


def cube_from_formula(f: Formula) -> Cube:
    if isinstance(f, Const) and f.value:
        return Cube()
    parts = f.args if isinstance(f, And) else (f,)
    lits = []
    for p in parts:
        if isinstance(p, Atom):
            lits.append(Literal(p.var, True))
        elif isinstance(p, Not) and isinstance(p.arg, Atom):
            lits.append(Literal(p.arg.var, False))
        else:
            raise FormatError(f"not a cube: {format_formula(f)}")
    return Cube(lits)


def parse_cube(text: str, n: Optional[int] = None) -> Cube:
    return cube_from_formula(parse_formula(text, n, allow_primed=False))


def parse_basis(text: str, n: Optional[int] = None) -> Tuple[Cube, ...]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_cube(line, n))
        except FormatError as exc:
            raise FormatError(str(exc), lineno, 1) from None
    return tuple(out)


def parse_system(text: str) -> TransitionSystem:
    r = _Reader(text)
    tok = r.next()
    if tok.text != "vars":
        raise FormatError("file must start with 'vars <n>'", tok.line, tok.col)
    ntok = r.next()
    if not ntok.text.isdigit():
        raise FormatError("expected variable count", ntok.line, ntok.col)
    n = int(ntok.text)
    sections = {}
    basis = []
    while r.peek() is not None:
        key = r.next()
        if key.text not in ("init", "trans", "bad", "basis"):
            raise FormatError(f"unknown section {key.text!r}", key.line, key.col)
        if key.text in sections:
            raise FormatError(f"duplicate section {key.text!r}", key.line, key.col)
        f = _read_formula(r, n, allow_primed=key.text == "trans")
        if key.text == "basis":
            basis.append(cube_from_formula(f))
        else:
            sections[key.text] = f
    for name in ("init", "trans", "bad"):
        if name not in sections:
            raise FormatError(f"missing section {name!r}")
    return TransitionSystem(n, sections["init"], sections["trans"], sections["bad"], tuple(basis))


def format_formula(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        if f.var.copy > 1:
            raise LogicError(f"{f.var} has no textual form")
        return f"p{f.var.index}" + ("'" if f.var.copy else "")
    if isinstance(f, Not):
        return f"(not {format_formula(f.arg)})"
    if isinstance(f, (And, Or, Xor)):
        op = {And: "and", Or: "or", Xor: "xor"}[type(f)]
        return f"({op} " + " ".join(format_formula(a) for a in f.args) + ")"
    if isinstance(f, Iff):
        return f"(iff {format_formula(f.left)} {format_formula(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


def format_system(ts: TransitionSystem) -> str:
    lines = [f"vars {ts.n}",
             f"init {format_formula(ts.init)}",
             f"trans {format_formula(ts.tr)}",
             f"bad {format_formula(ts.bad)}"]
    lines += [f"basis {format_formula(b.to_formula())}" for b in ts.basis]
    return "\n".join(lines) + "\n"


def parse_tree(text: str, n: Optional[int] = None) -> DecisionTree:
    r = _Reader(text)

    def read() -> DecisionTree:
        r.expect("(")
        head = r.next()
        if head.text == "leaf":
            val = r.next()
            if val.text not in ("true", "false"):
                raise FormatError("leaf value must be true or false", val.line, val.col)
            r.expect(")")
            return Leaf(val.text == "true")
        if head.text == "node":
            v = r.next()
            m = _ATOM.match(v.text)
            if not m or m.group(2):
                raise FormatError(f"expected unprimed variable, got {v.text!r}", v.line, v.col)
            low = read()
            high = read()
            r.expect(")")
            return Node(int(m.group(1)), low, high)
        raise FormatError(f"expected 'node' or 'leaf', got {head.text!r}", head.line, head.col)

    t = read()
    if r.peek() is not None:
        tok = r.peek()
        raise FormatError(f"trailing input {tok.text!r}", tok.line, tok.col)
    check_tree(t, n)
    return t
