"""Concrete syntax: tokenizer, parser and renderer.

Prolog-flavored surface: lowercase names are constants and functors,
capitalized (or underscore-initial) names are variables, clauses end with a
dot, `:-` separates head from body, `,` is conjunction, and goals may use
`forall X (...)`, `exists X (...)` and `D => G`. The D left of `=>` is
written in clause syntax, parenthesized unless it is a bare atom.

Capitalized variables close at the outermost enclosing clause boundary: the
program clause itself, or, inside a goal, the embedded D-part they occur
in. Anywhere else in a goal they are an error; goals must bind explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .builtins import is_builtin_functor
from .syntax import (
    All,
    And,
    Atom,
    Clause,
    Compound,
    Const,
    DFormula,
    Exists,
    Fact,
    Forall,
    GFormula,
    Implies,
    Int,
    Param,
    Program,
    Term,
    Var,
)

RESERVED = {"forall", "exists", "is"}

_PUNCT = (":-", "=<", "=>", "=", "<", "(", ")", ",", ".", "+", "-", "*")
_OP_FUNCTORS = {"=", "<", "=<", "+", "-", "*"}
_COMPARATORS = {"<", "=<", "="}


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"line {span.line}, column {span.column}: {message}")
        self.message = message
        self.span = span


class LoadError(ParseError):
    """A parsed program that cannot be loaded (e.g. redefines a builtin)."""


@dataclass(frozen=True)
class Token:
    kind: str  # name | vname | int | punct | eof
    text: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, bol = 0, 1, 0
    n = len(text)

    def span(start: int, end: int) -> SourceSpan:
        return SourceSpan(start, end, line, start - bol + 1)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            bol = i
            continue
        if c.isspace():
            i += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "vname" if (c == "_" or c.isupper()) else "name"
            toks.append(Token(kind, word, span(i, j)))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], span(i, j)))
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(Token("punct", p, span(i, i + len(p))))
                i += len(p)
                break
        else:
            raise ParseError(f"illegal character {c!r}", span(i, i + 1))
    toks.append(Token("eof", "", span(n, n)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        # every variable occurrence, in source order, for error reporting
        self.voccurrences: list[tuple[str, SourceSpan]] = []

    # -- token plumbing ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at_punct(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.text == text

    def eat_punct(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "punct" or t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.span)
        return self.next()

    def fail(self, message: str) -> ParseError:
        return ParseError(message, self.peek().span)

    # -- terms ---------------------------------------------------------------

    def expr(self) -> Term:
        t = self.mul()
        while self.peek().kind == "punct" and self.peek().text in ("+", "-"):
            op = self.next().text
            t = Compound(op, (t, self.mul()))
        return t

    def mul(self) -> Term:
        t = self.unary()
        while self.at_punct("*"):
            self.next()
            t = Compound("*", (t, self.unary()))
        return t

    def unary(self) -> Term:
        if self.at_punct("-") and self.peek(1).kind == "int":
            self.next()
            tok = self.next()
            return Int(-int(tok.text))
        return self.prim()

    def prim(self) -> Term:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Int(int(t.text))
        if t.kind == "vname":
            self.next()
            self.voccurrences.append((t.text, t.span))
            return Var(t.text, 0)
        if t.kind == "name":
            if t.text in ("forall", "exists"):
                raise ParseError(f"reserved word {t.text!r} cannot be a term", t.span)
            self.next()
            if self.at_punct("("):
                return Compound(t.text, self.args())
            return Const(t.text)
        if t.kind == "punct" and t.text in _OP_FUNCTORS and self.peek(1).kind == "punct" \
                and self.peek(1).text == "(":
            self.next()
            return Compound(t.text, self.args())
        if self.at_punct("("):
            self.next()
            inner = self.expr()
            self.eat_punct(")")
            return inner
        raise self.fail(f"expected a term, found {t.text or 'end of input'!r}")

    def args(self) -> tuple[Term, ...]:
        self.eat_punct("(")
        out = [self.expr()]
        while self.at_punct(","):
            self.next()
            out.append(self.expr())
        self.eat_punct(")")
        return tuple(out)

    def atom_term(self) -> Term:
        """An atomic formula: a predicate, possibly written with infix builtins."""
        start = self.peek()
        left = self.expr()
        t = self.peek()
        if (t.kind == "punct" and t.text in _COMPARATORS) or (t.kind == "name" and t.text == "is"):
            self.next()
            return Compound("is" if t.kind == "name" else t.text, (left, self.expr()))
        if not isinstance(left, (Const, Compound)):
            raise ParseError("expected a predicate", start.span)
        return left

    # -- goals ---------------------------------------------------------------

    def goal(self) -> GFormula:
        g = self.imp()
        if self.at_punct(","):
            self.next()
            return And(g, self.goal())
        return g

    def imp(self) -> GFormula:
        if self.at_punct("("):
            save = self.pos
            try:
                d = self.paren_dpart()
            except ParseError:
                self.pos = save
            else:
                if self.at_punct("=>"):
                    self.next()
                    return Implies(d, self.imp())
                self.pos = save
        g = self.primary_goal()
        if self.at_punct("=>"):
            tok = self.peek()
            if not isinstance(g, Atom):
                raise ParseError("left side of => must be a clause or an atom", tok.span)
            self.next()
            return Implies(Fact(g.pred), self.imp())
        return g

    def primary_goal(self) -> GFormula:
        t = self.peek()
        if t.kind == "name" and t.text in ("forall", "exists"):
            self.next()
            v = self.peek()
            if v.kind != "vname":
                raise ParseError(f"{t.text} needs a variable, found {v.text!r}", v.span)
            self.next()
            self.eat_punct("(")
            body = self.goal()
            self.eat_punct(")")
            return Forall(v.text, body) if t.text == "forall" else Exists(v.text, body)
        if self.at_punct("("):
            self.next()
            inner = self.goal()
            self.eat_punct(")")
            return inner
        return Atom(self.atom_term())

    def paren_dpart(self) -> DFormula:
        self.eat_punct("(")
        if self.at_punct("("):
            d = self.paren_dpart()
        else:
            head = self.atom_term()
            if self.at_punct(":-"):
                self.next()
                d = Clause(self.goal(), head)
            else:
                d = Fact(head)
        self.eat_punct(")")
        return d

    # -- clauses -------------------------------------------------------------

    def clause(self) -> DFormula:
        head_tok = self.peek()
        head = self.atom_term()
        name, arity = _functor_of(head)
        if is_builtin_functor(name, arity):
            raise LoadError(f"cannot redefine builtin {name}/{arity}", head_tok.span)
        if self.at_punct(":-"):
            self.next()
            d: DFormula = Clause(self.goal(), head)
        else:
            d = Fact(head)
        self.eat_punct(".")
        return d

    def first_span(self, name: str) -> SourceSpan:
        for n, s in self.voccurrences:
            if n == name:
                return s
        return self.peek().span


def _functor_of(atom: Term) -> tuple[str, int]:
    if isinstance(atom, Const):
        return atom.name, 0
    if isinstance(atom, Compound):
        return atom.functor, len(atom.args)
    raise TypeError(f"not an atom: {atom!r}")


# ---------------------------------------------------------------------------
# implicit quantification


def _free_into(x, bound: frozenset, out: list[str]) -> None:
    """Collect free capitalized names in first-occurrence (source) order."""
    if isinstance(x, Var):
        if x.level == 0 and x.name not in bound and x.name not in out:
            out.append(x.name)
    elif isinstance(x, Compound):
        for a in x.args:
            _free_into(a, bound, out)
    elif isinstance(x, (Const, Int, Param)):
        pass
    elif isinstance(x, Atom):
        _free_into(x.pred, bound, out)
    elif isinstance(x, And):
        _free_into(x.left, bound, out)
        _free_into(x.right, bound, out)
    elif isinstance(x, Implies):
        _free_into(x.hyp, bound, out)
        _free_into(x.body, bound, out)
    elif isinstance(x, (Exists, Forall, All)):
        _free_into(x.body, bound | {x.var}, out)
    elif isinstance(x, Fact):
        _free_into(x.head, bound, out)
    elif isinstance(x, Clause):
        # source order is head first
        _free_into(x.head, bound, out)
        _free_into(x.body, bound, out)
    else:
        raise TypeError(f"no variables in {x!r}")


def _close_clause(d: DFormula, bound: frozenset = frozenset()) -> DFormula:
    free: list[str] = []
    _free_into(d, bound, free)
    for name in reversed(free):
        d = All(name, d)
    return d


def _close_goal(g: GFormula, bound: frozenset) -> GFormula:
    if isinstance(g, Atom):
        return g
    if isinstance(g, And):
        return And(_close_goal(g.left, bound), _close_goal(g.right, bound))
    if isinstance(g, Exists):
        return Exists(g.var, _close_goal(g.body, bound | {g.var}))
    if isinstance(g, Forall):
        return Forall(g.var, _close_goal(g.body, bound | {g.var}))
    if isinstance(g, Implies):
        free: list[str] = []
        _free_into(g.hyp, bound, free)
        inner_bound = bound | set(free)
        hyp = _close_embedded(g.hyp, inner_bound)
        for name in reversed(free):
            hyp = All(name, hyp)
        return Implies(hyp, _close_goal(g.body, bound))
    raise TypeError(f"not a goal: {g!r}")


def _close_embedded(d: DFormula, bound: frozenset) -> DFormula:
    if isinstance(d, Fact):
        return d
    if isinstance(d, Clause):
        return Clause(_close_goal(d.body, bound), d.head)
    if isinstance(d, All):
        return All(d.var, _close_embedded(d.body, bound | {d.var}))
    raise TypeError(f"not a clause: {d!r}")


# ---------------------------------------------------------------------------
# entry points


def parse_program(text: str) -> Program:
    p = _Parser(text)
    clauses: list[DFormula] = []
    while p.peek().kind != "eof":
        clauses.append(_close_clause(p.clause()))
    return Program(tuple(clauses))


def parse_goal(text: str) -> GFormula:
    p = _Parser(text)
    g = p.goal()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"unexpected {t.text!r} after goal", t.span)
    g = _close_goal(g, frozenset())
    free: list[str] = []
    _free_into(g, frozenset(), free)
    if free:
        raise ParseError(
            f"unbound variable {free[0]}; goals must bind variables explicitly",
            p.first_span(free[0]),
        )
    return g


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.expr()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r} after term", tok.span)
    return t


# ---------------------------------------------------------------------------
# rendering

_INFIX_PREC = {"=": 0, "<": 0, "=<": 0, "is": 0, "+": 1, "-": 1, "*": 2}


def _render_term(t: Term, prec: int) -> str:
    if isinstance(t, (Var, Param, Const)):
        return t.name
    if isinstance(t, Int):
        return str(t.value)
    if isinstance(t, Compound):
        p = _INFIX_PREC.get(t.functor)
        if p is not None and len(t.args) == 2:
            op = f" {t.functor} " if p == 0 else t.functor
            s = f"{_render_term(t.args[0], p)}{op}{_render_term(t.args[1], p + 1)}"
            return f"({s})" if prec > p else s
        inner = ", ".join(_render_term(a, 1) for a in t.args)
        return f"{t.functor}({inner})"
    raise TypeError(f"not a term: {t!r}")


def _render_goal(g: GFormula, prec: int) -> str:
    # prec 0 allows bare conjunction; 1 is an implication operand
    if isinstance(g, Atom):
        return _render_term(g.pred, 0)
    if isinstance(g, And):
        s = f"{_render_goal(g.left, 1)}, {_render_goal(g.right, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(g, Implies):
        return f"{_render_dpart(g.hyp)} => {_render_goal(g.body, 1)}"
    if isinstance(g, Exists):
        return f"exists {g.var} ({_render_goal(g.body, 0)})"
    if isinstance(g, Forall):
        return f"forall {g.var} ({_render_goal(g.body, 0)})"
    raise TypeError(f"not a goal: {g!r}")


def _strip_alls(d: DFormula) -> DFormula:
    while isinstance(d, All):
        d = d.body
    return d


def _render_dpart(d: DFormula) -> str:
    inner = _strip_alls(d)
    if isinstance(inner, Fact):
        body = _render_term(inner.head, 0)
        # bare atoms may stand unparenthesized left of =>
        return body if isinstance(d, Fact) else f"({body})"
    return f"({_render_term(inner.head, 0)} :- {_render_goal(inner.body, 0)})"


def _render_clause(d: DFormula) -> str:
    inner = _strip_alls(d)
    if isinstance(inner, Fact):
        return f"{_render_term(inner.head, 0)}."
    return f"{_render_term(inner.head, 0)} :- {_render_goal(inner.body, 0)}."


def render(x) -> str:
    """Concrete syntax for a term, goal, clause or program.

    For anything produced by the parsers, parsing the rendering yields the
    same tree back (generated binder names permitting).
    """
    if isinstance(x, (Var, Param, Const, Int, Compound)):
        return _render_term(x, 0)
    if isinstance(x, (Atom, And, Exists, Forall, Implies)):
        return _render_goal(x, 0)
    if isinstance(x, (Fact, Clause, All)):
        return _render_clause(x)
    if isinstance(x, Program):
        return "\n".join(_render_clause(c) for c in x.clauses)
    raise TypeError(f"cannot render {x!r}")
