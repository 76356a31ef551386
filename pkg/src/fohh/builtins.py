"""Builtin predicates: recognition and arithmetic evaluation.

Builtin atoms are never proved against the program. The proof phase accepts
them symbolically (a residual leaf); the execution phase evaluates them once
the environment has enough ground values. Arithmetic is signed 64-bit with
checked overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import Compound, Const, Int, Param, Substitution, Term, Var


class ResidualKind(Enum):
    IS = "is"
    LT = "<"
    LE = "=<"
    EQ = "="
    NAT = "nat"
    TRUE = "true"


@dataclass(frozen=True)
class Residual:
    """A builtin constraint carried on a proof-tree leaf, settled at run time."""

    kind: ResidualKind
    args: tuple[Term, ...]


_TABLE: dict[tuple[str, int], ResidualKind] = {
    ("is", 2): ResidualKind.IS,
    ("<", 2): ResidualKind.LT,
    ("=<", 2): ResidualKind.LE,
    ("=", 2): ResidualKind.EQ,
    ("nat", 1): ResidualKind.NAT,
    ("true", 0): ResidualKind.TRUE,
}

ARITH_KINDS = frozenset({ResidualKind.IS, ResidualKind.LT, ResidualKind.LE, ResidualKind.NAT})


def is_builtin_functor(name: str, arity: int) -> bool:
    return (name, arity) in _TABLE


def recognize(atom: Term) -> Residual | None:
    """The residual for a builtin atom, or None for ordinary predicates."""
    if isinstance(atom, Const):
        kind = _TABLE.get((atom.name, 0))
        return Residual(kind, ()) if kind else None
    if isinstance(atom, Compound):
        kind = _TABLE.get((atom.functor, len(atom.args)))
        return Residual(kind, atom.args) if kind else None
    return None


I64_MIN = -(2**63)
I64_MAX = 2**63 - 1


class EvalError(Exception):
    """Arithmetic evaluation failure; .kind is non_ground, non_numeric or overflow."""

    def __init__(self, kind: str, term: Term):
        super().__init__(f"{kind}: {term}")
        self.kind = kind
        self.term = term


def _check(v: int, at: Term) -> int:
    if v < I64_MIN or v > I64_MAX:
        raise EvalError("overflow", at)
    return v


def eval_arith(term: Term, env: Substitution | None = None) -> int:
    """Evaluate +, - and * over integers under env, 64-bit checked."""
    t = env.apply(term) if env is not None else term
    return _eval(t)


def _eval(t: Term) -> int:
    if isinstance(t, Int):
        return _check(t.value, t)
    if isinstance(t, (Var, Param)):
        raise EvalError("non_ground", t)
    if isinstance(t, Compound) and len(t.args) == 2 and t.functor in ("+", "-", "*"):
        a, b = _eval(t.args[0]), _eval(t.args[1])
        if t.functor == "+":
            return _check(a + b, t)
        if t.functor == "-":
            return _check(a - b, t)
        return _check(a * b, t)
    raise EvalError("non_numeric", t)
