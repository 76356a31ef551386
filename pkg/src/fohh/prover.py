"""Goal-directed proof search over hereditary Harrop programs.

The search alternates two phases. Goal reduction decomposes the goal by its
top connective; when the goal is atomic, a program clause is selected and
backchained on. Both phases are depth-first, try clauses in program order,
and reduce the left conjunct first, so answers arrive deterministically.

A universally quantified goal introduces a fresh rigid parameter one level
deeper than the current one; unification's scope check (see unify) keeps
those parameters from leaking into older variables. Builtin atoms are not
proved: they are recorded as residual leaves and settled by the executor.

Every success is witnessed by a StructuredProof; prove_tree flattens the
first one into the offset-encoded array form after grounding it with the
answer substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import islice
from typing import Iterator, Optional, Union

from .builtins import Residual, recognize
from .syntax import (
    All,
    And,
    Atom,
    Clause,
    DFormula,
    Exists,
    Fact,
    Forall,
    FreshNames,
    GFormula,
    Implies,
    Program,
    Substitution,
    Term,
    Var,
    instantiate,
)
from .unify import Failure, unify


class Rule(Enum):
    """Which reduction produced a proof node; the value is its printed tag."""

    FACT = "1"          # focused atom matches the goal atom
    BACK_IMPLIES = "2"  # backchain through a clause body
    BACK_ALL = "3"      # instantiate a universal clause
    SELECT = "4"        # atomic goal: select a program clause
    AND = "5"           # split a conjunction
    IMPLIES = "6"       # load a hypothesis
    FORALL = "7"        # introduce a rigid parameter
    EXISTS = "8"        # instantiate an existential goal
    BUILTIN = "b"       # residual builtin leaf


RULE_ARITY = {
    Rule.FACT: 0,
    Rule.BUILTIN: 0,
    Rule.AND: 2,
    Rule.BACK_IMPLIES: 1,
    Rule.BACK_ALL: 1,
    Rule.SELECT: 1,
    Rule.IMPLIES: 1,
    Rule.FORALL: 1,
    Rule.EXISTS: 1,
}


@dataclass(frozen=True)
class Sequent:
    """What was to be proved at one point: context, optional focused clause, goal."""

    context: Program
    focus: Optional[DFormula]
    goal: GFormula


@dataclass(frozen=True)
class SearchLimits:
    max_depth: int = 64
    max_solutions: int = 1

    def __post_init__(self) -> None:
        if self.max_depth < 1 or self.max_solutions < 1:
            raise ValueError("limits must be at least 1")


@dataclass(frozen=True)
class StructuredProof:
    node: Sequent
    rule: Rule
    children: tuple["StructuredProof", ...] = ()
    residual: Residual | None = None


class _Run:
    """Per-search mutable state: name supply, settings, bookkeeping."""

    __slots__ = ("names", "occurs_check", "pruned", "exists_vars")

    def __init__(self, occurs_check: bool):
        self.names = FreshNames()
        self.occurs_check = occurs_check
        self.pruned = False
        self.exists_vars: list[Var] = []


def _prove(program: Program, goal: GFormula, th: Substitution, depth: int,
           level: int, run: _Run) -> Iterator[tuple[Substitution, StructuredProof]]:
    if depth <= 0:
        run.pruned = True
        return
    seq = Sequent(program, None, goal)
    if isinstance(goal, Atom):
        residual = recognize(goal.pred)
        if residual is not None:
            yield th, StructuredProof(seq, Rule.BUILTIN, (), residual)
            return
        for clause in program:
            for th2, sub in backchain(clause, program, goal.pred, th, depth - 1, level, run):
                yield th2, StructuredProof(seq, Rule.SELECT, (sub,))
    elif isinstance(goal, And):
        for th1, left in _prove(program, goal.left, th, depth - 1, level, run):
            for th2, right in _prove(program, goal.right, th1, depth - 1, level, run):
                yield th2, StructuredProof(seq, Rule.AND, (left, right))
    elif isinstance(goal, Implies):
        extended = program.extended(goal.hyp)
        for th1, sub in _prove(extended, goal.body, th, depth - 1, level, run):
            yield th1, StructuredProof(seq, Rule.IMPLIES, (sub,))
    elif isinstance(goal, Forall):
        p = run.names.fresh_param(goal.var, level + 1)
        body = instantiate(goal.var, p, goal.body)
        for th1, sub in _prove(program, body, th, depth - 1, level + 1, run):
            yield th1, StructuredProof(seq, Rule.FORALL, (sub,))
    elif isinstance(goal, Exists):
        v = run.names.fresh_var(goal.var, level)
        run.exists_vars.append(v)
        body = instantiate(goal.var, v, goal.body)
        for th1, sub in _prove(program, body, th, depth - 1, level, run):
            yield th1, StructuredProof(seq, Rule.EXISTS, (sub,))
    else:
        raise TypeError(f"not a goal: {goal!r}")


def backchain(focus: DFormula, program: Program, atom: Term, th: Substitution,
              depth: int, level: int, run: _Run) -> Iterator[tuple[Substitution, StructuredProof]]:
    """Drive a focused clause toward the atomic goal."""
    if depth <= 0:
        run.pruned = True
        return
    seq = Sequent(program, focus, Atom(atom))
    if isinstance(focus, Fact):
        th2 = unify(focus.head, atom, th, run.occurs_check)
        if not isinstance(th2, Failure):
            yield th2, StructuredProof(seq, Rule.FACT, ())
    elif isinstance(focus, Clause):
        th2 = unify(focus.head, atom, th, run.occurs_check)
        if not isinstance(th2, Failure):
            for th3, sub in _prove(program, focus.body, th2, depth - 1, level, run):
                yield th3, StructuredProof(seq, Rule.BACK_IMPLIES, (sub,))
    elif isinstance(focus, All):
        v = run.names.fresh_var(focus.var, level)
        inner = instantiate(focus.var, v, focus.body)
        for th2, sub in backchain(inner, program, atom, th, depth - 1, level, run):
            yield th2, StructuredProof(seq, Rule.BACK_ALL, (sub,))
    else:
        raise TypeError(f"not a clause: {focus!r}")


class Answers:
    """Lazy stream of answer substitutions.

    depth_exceeded reports whether any branch was abandoned at the depth
    limit during the search performed so far; after the stream is drained
    it is definitive.
    """

    def __init__(self, inner: Iterator[Substitution], run: _Run):
        self._inner = inner
        self._run = run

    def __iter__(self) -> Iterator[Substitution]:
        return self._inner

    def __next__(self) -> Substitution:
        return next(self._inner)

    @property
    def depth_exceeded(self) -> bool:
        return self._run.pruned


def _answer(th: Substitution, run: _Run) -> Substitution:
    """Restrict a success substitution to the goal's existential variables."""
    return Substitution({v: th.apply(v) for v in run.exists_vars if th.get(v) is not None})


def iter_proofs(program: Program, goal: GFormula, limits: SearchLimits = SearchLimits(),
                occurs_check: bool = True) -> Iterator[tuple[Substitution, StructuredProof]]:
    """All solutions up to the limits, each with its grounded structured proof."""
    run = _Run(occurs_check)
    raw = _prove(program, goal, Substitution(), limits.max_depth, 0, run)
    for th, proof in islice(raw, limits.max_solutions):
        yield _answer(th, run), ground_proof(proof, th)


def solve(program: Program, goal: GFormula, limits: SearchLimits = SearchLimits(),
          occurs_check: bool = True) -> Answers:
    """Lazy answer substitutions for goal, depth-first and deterministic."""
    run = _Run(occurs_check)
    raw = _prove(program, goal, Substitution(), limits.max_depth, 0, run)
    gen = (_answer(th, run) for th, _ in islice(raw, limits.max_solutions))
    return Answers(gen, run)


def ground_proof(proof: StructuredProof, th: Substitution) -> StructuredProof:
    """Apply the final substitution to every sequent of the proof."""
    seq = Sequent(
        th.apply(proof.node.context),
        th.apply(proof.node.focus) if proof.node.focus is not None else None,
        th.apply(proof.node.goal),
    )
    residual = proof.residual
    if residual is not None:
        residual = Residual(residual.kind, tuple(th.apply(a) for a in residual.args))
    return StructuredProof(seq, proof.rule,
                           tuple(ground_proof(c, th) for c in proof.children), residual)


@dataclass(frozen=True)
class TreeOutcome:
    """prove_tree result: the flat tree and answer for the first solution."""

    tree: Optional["FlatProofTree"]  # noqa: F821 - defined in prooftree
    answer: Optional[Substitution]
    depth_exceeded: bool

    @property
    def succeeded(self) -> bool:
        return self.tree is not None


def prove_tree(program: Program, goal: GFormula, limits: SearchLimits = SearchLimits(),
               occurs_check: bool = True) -> TreeOutcome:
    """Search for the first solution and flatten its grounded proof."""
    from .prooftree import flatten

    run = _Run(occurs_check)
    raw = _prove(program, goal, Substitution(), limits.max_depth, 0, run)
    got = next(raw, None)
    if got is None:
        return TreeOutcome(None, None, run.pruned)
    th, proof = got
    return TreeOutcome(flatten(ground_proof(proof, th)), _answer(th, run), run.pruned)
