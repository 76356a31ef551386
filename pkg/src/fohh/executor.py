"""Execution phase: replay a flat proof tree against user input.

The proof tree is walked from the root. Universal-goal nodes pause and ask
the input provider for a constant, which enters the environment bound to
that node's parameter. Instantiation nodes (existential goals and universal
clauses) push known values down by rewriting their child block on a private
copy. Residual builtin leaves are finally evaluated under the environment;
an unsatisfied one stops the run with the offending node's index.

Witnesses are collected per existential node and grounded once more at the
end, after all residual outputs are known.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Protocol

from .builtins import ARITH_KINDS, EvalError, Residual, ResidualKind, eval_arith
from .parser import ParseError, parse_term
from .prooftree import FlatNode, FlatProofTree, render_sequent, validate
from .prover import Rule, Sequent
from .syntax import (
    All,
    BinderMismatch,
    Exists,
    Forall,
    Int,
    Param,
    Substitution,
    Term,
    Var,
    binder_witness,
    carriers,
    is_ground,
    params_of,
    replace_term,
    vars_of,
)


class InputProvider(Protocol):
    def request(self, param: Param, prompt: str, node_index: int) -> Term:
        """Return a ground term for the parameter, or raise InputDeclined."""
        ...


class InputDeclined(Exception):
    """The provider cannot (or will not) answer; execution aborts."""


class MalformedTreeError(Exception):
    """The tree violates its invariants or a node lacks its expected shape."""


@dataclass(frozen=True)
class ReadEvent:
    param: Param
    prompt: str
    value: Term
    node_index: int


class ExecutionStatus(Enum):
    COMPLETED = "completed"
    RESIDUAL_VIOLATION = "residual_violation"
    ABORTED = "aborted"


@dataclass
class ExecutionResult:
    status: ExecutionStatus
    violation_index: Optional[int]
    reads: list[ReadEvent]
    witnesses: list[tuple[str, Term]]
    env: Substitution


@dataclass(frozen=True)
class ResidualFailure:
    reason: str  # false | non_ground | non_numeric | overflow


class ScriptedProvider:
    """Feeds reads from plain text, one term per line, in prompt order."""

    def __init__(self, text: str):
        self.lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        self.next = 0

    def request(self, param: Param, prompt: str, node_index: int) -> Term:
        if self.next >= len(self.lines):
            raise InputDeclined("script exhausted")
        line = self.lines[self.next]
        self.next += 1
        try:
            return parse_term(line)
        except ParseError as e:
            raise InputDeclined(f"unreadable script line {line!r}: {e}") from e


class _Violated(Exception):
    def __init__(self, index: int):
        self.index = index


MAX_REPROMPTS = 3


def eval_residual(res: Residual, env: Substitution) -> Substitution | ResidualFailure:
    """Settle one builtin constraint under env; may bind one output Var."""
    args = tuple(env.apply(a) for a in res.args)
    kind = res.kind
    if kind == ResidualKind.TRUE:
        return env
    if kind == ResidualKind.IS:
        target, expr = args
        try:
            k = eval_arith(expr)
        except EvalError as e:
            return ResidualFailure(e.kind)
        if isinstance(target, Var):
            return env.extended({target: Int(k)})
        if isinstance(target, Int):
            return env if target.value == k else ResidualFailure("false")
        return ResidualFailure("false" if is_ground(target) else "non_ground")
    if kind in (ResidualKind.LT, ResidualKind.LE):
        try:
            a, b = eval_arith(args[0]), eval_arith(args[1])
        except EvalError as e:
            return ResidualFailure(e.kind)
        ok = a < b if kind == ResidualKind.LT else a <= b
        return env if ok else ResidualFailure("false")
    if kind == ResidualKind.EQ:
        a, b = args
        if a == b:
            return env
        if isinstance(a, Var) and is_ground(b):
            return env.extended({a: b})
        if isinstance(b, Var) and is_ground(a):
            return env.extended({b: a})
        if is_ground(a) and is_ground(b):
            return ResidualFailure("false")
        return ResidualFailure("non_ground")
    if kind == ResidualKind.NAT:
        (t,) = args
        if isinstance(t, Int):
            return env if t.value >= 0 else ResidualFailure("false")
        return ResidualFailure("false" if is_ground(t) else "non_ground")
    raise AssertionError(f"unhandled residual kind {kind}")


def execute(tree: FlatProofTree, provider: InputProvider,
            trace: Callable[[int, Rule], None] | None = None) -> ExecutionResult:
    problems = validate(tree)
    if problems:
        raise MalformedTreeError(f"{problems[0].kind} at node {problems[0].index}")

    base = tree.node(tree.n).sequent.context
    cur: list[FlatNode] = list(tree.nodes)  # private copy; rewrites land here
    env = Substitution()
    reads: list[ReadEvent] = []
    witnesses: list[tuple[str, Term]] = []

    def node(i: int) -> FlatNode:
        return cur[i - 1]

    def rewrite_block(i: int, old: Term, new: Term) -> None:
        lo, hi = tree.block(i)
        for j in range(lo, hi + 1):
            nd = cur[j - 1]
            seq = Sequent(
                replace_term(old, new, nd.sequent.context),
                replace_term(old, new, nd.sequent.focus) if nd.sequent.focus is not None else None,
                replace_term(old, new, nd.sequent.goal),
            )
            res = nd.residual
            if res is not None:
                res = Residual(res.kind, tuple(replace_term(old, new, a) for a in res.args))
            cur[j - 1] = FlatNode(seq, nd.rule, nd.offsets, res)

    def int_required(i: int, p: Param) -> bool:
        lo, hi = tree.block(i)
        for j in range(lo, hi + 1):
            res = cur[j - 1].residual
            if res is not None and res.kind in ARITH_KINDS:
                if any(p in params_of(a) for a in res.args):
                    return True
        return False

    def ask(p: Param, i: int, needs_int: bool) -> Term:
        prompt = render_sequent(node(i).sequent, base)
        for _ in range(1 + MAX_REPROMPTS):
            value = provider.request(p, prompt, i)
            if not is_ground(value):
                continue
            if needs_int and not isinstance(value, Int):
                continue
            return value
        raise InputDeclined("no acceptable input")

    def visit(i: int) -> None:
        nonlocal env
        nd = node(i)
        if trace is not None:
            trace(i, nd.rule)
        if nd.rule == Rule.FACT:
            return
        if nd.rule == Rule.BUILTIN:
            if nd.residual is None:
                raise MalformedTreeError(f"builtin leaf {i} has no residual")
            settled = eval_residual(nd.residual, env)
            if isinstance(settled, ResidualFailure):
                raise _Violated(i)
            env = settled
            return
        if nd.rule == Rule.AND:
            left, right = tree.children(i)
            visit(left)
            visit(right)
            return
        (child,) = tree.children(i)
        if nd.rule == Rule.FORALL:
            goal = nd.sequent.goal
            assert isinstance(goal, Forall)
            try:
                w = binder_witness(goal.var, goal.body, node(child).sequent.goal)
            except BinderMismatch as e:
                raise MalformedTreeError(f"forall node {i}: {e}") from e
            if w is not None and not isinstance(w, Param):
                raise MalformedTreeError(f"forall node {i} instantiated with {w}")
            p = w if w is not None else Param(goal.var, 0)
            value = ask(p, i, w is not None and int_required(child, p))
            if w is not None:
                env = env.extended({p: value})
            reads.append(ReadEvent(p, render_sequent(nd.sequent, base), value, i))
            visit(child)
            return
        if nd.rule == Rule.EXISTS:
            goal = nd.sequent.goal
            assert isinstance(goal, Exists)
            try:
                w = binder_witness(goal.var, goal.body, node(child).sequent.goal)
            except BinderMismatch as e:
                raise MalformedTreeError(f"exists node {i}: {e}") from e
            if w is None:
                witnesses.append((goal.var, Var(goal.var, 0)))
            else:
                c = env.apply(w)
                if c != w:
                    rewrite_block(child, w, c)
                witnesses.append((goal.var, c))
            visit(child)
            return
        if nd.rule == Rule.BACK_ALL:
            focus = nd.sequent.focus
            assert isinstance(focus, All)
            child_focus = node(child).sequent.focus
            if child_focus is None:
                raise MalformedTreeError(f"clause-instance node {i} has no focused child")
            try:
                w = binder_witness(focus.var, focus.body, child_focus)
            except BinderMismatch as e:
                raise MalformedTreeError(f"clause-instance node {i}: {e}") from e
            if w is not None:
                c = env.apply(w)
                if c != w:
                    rewrite_block(child, w, c)
            visit(child)
            return
        # SELECT, BACK_IMPLIES, IMPLIES: plain descent
        visit(child)

    try:
        visit(tree.n)
    except _Violated as v:
        return ExecutionResult(ExecutionStatus.RESIDUAL_VIOLATION, v.index, reads, witnesses, env)
    except InputDeclined:
        return ExecutionResult(ExecutionStatus.ABORTED, None, reads, witnesses, env)
    witnesses = _tidy([(name, env.apply(t)) for name, t in witnesses])
    return ExecutionResult(ExecutionStatus.COMPLETED, None, reads, witnesses, env)


def _tidy(witnesses: list[tuple[str, Term]]) -> list[tuple[str, Term]]:
    """Rename leftover machine variables in witnesses back to source-style
    names (their binder hints), so unconstrained answers read naturally."""
    machine: list[Var] = []
    for _, t in witnesses:
        for v in vars_of(t):
            if "." in v.name and v not in machine:
                machine.append(v)
    if not machine:
        return witnesses
    taken = {x.name for _, t in witnesses for x in carriers(t)}
    renames: dict[Var, Term] = {}
    for v in machine:
        hint = v.name.lstrip("_").rsplit(".", 1)[0] or "T"
        fresh = hint
        while fresh in taken:
            fresh += "'"
        taken.add(fresh)
        renames[v] = Var(fresh, 0)
    s = Substitution(renames)
    return [(name, s.apply(t)) for name, t in witnesses]
