"""Seeded random programs, goals, and proof shapes for property tests.

Everything goes through the public parsers, so generated cases are
well-formed by construction and exercise the same pipeline users do.
Programs are mostly stratified (clause bodies call lower predicates) with
an occasional self-recursive clause; this keeps search at depth 12 finite
in practice while still producing both provable and unprovable pairs.
"""

from __future__ import annotations

import random

from fohh import Atom, Const, Program, Rule, Sequent, StructuredProof, parse_goal, parse_program

# predicate order matters: bodies call predicates earlier in the list
PREDS = [("s", 0), ("p", 1), ("q", 1), ("r", 2)]
CONSTS = ["a", "b", "c"]
VARS = ["X", "Y", "Z"]


def _term(rng: random.Random, pool: list[str], depth: int = 1) -> str:
    roll = rng.random()
    if pool and roll < 0.35:
        return rng.choice(pool)
    if roll < 0.55:
        return str(rng.randint(0, 3))
    if depth > 0 and roll < 0.7:
        if rng.random() < 0.6:
            return f"f({_term(rng, pool, depth - 1)})"
        return f"g({_term(rng, pool, depth - 1)}, {_term(rng, pool, depth - 1)})"
    return rng.choice(CONSTS)


def _atom(rng: random.Random, pool: list[str], preds=None) -> str:
    name, arity = rng.choice(preds or PREDS)
    if arity == 0:
        return name
    args = ", ".join(_term(rng, pool) for _ in range(arity))
    return f"{name}({args})"


def _clause(rng: random.Random) -> str:
    idx = rng.randrange(len(PREDS))
    name, arity = PREDS[idx]
    pool = VARS[: rng.randint(0, 2)]
    head = name if arity == 0 else \
        f"{name}({', '.join(_term(rng, pool) for _ in range(arity))})"
    if rng.random() < 0.45:
        return f"{head}."
    lower = PREDS[:idx] or PREDS[: idx + 1]
    body_preds = list(lower)
    if rng.random() < 0.1:  # rare self-recursion
        body_preds.append(PREDS[idx])
    atoms = [_atom(rng, pool, body_preds) for _ in range(rng.randint(1, 2))]
    return f"{head} :- {', '.join(atoms)}."


def random_program_text(rng: random.Random, max_clauses: int = 6) -> str:
    return "\n".join(_clause(rng) for _ in range(rng.randint(1, max_clauses)))


def _dpart(rng: random.Random, pool: list[str]) -> str:
    if rng.random() < 0.6:
        return _atom(rng, pool)
    head = _atom(rng, pool)
    body = _atom(rng, pool)
    return f"({head} :- {body})"


def random_goal_text(rng: random.Random, depth: int = 4, pool: list[str] | None = None) -> str:
    pool = list(pool or [])
    if depth <= 0:
        return _atom(rng, pool)
    roll = rng.random()
    if roll < 0.3:
        return _atom(rng, pool)
    if roll < 0.5:
        return f"{random_goal_text(rng, depth - 1, pool)}, {random_goal_text(rng, depth - 1, pool)}"
    if roll < 0.65:
        v = rng.choice([v for v in VARS if v not in pool] or ["W"])
        return f"exists {v} ({random_goal_text(rng, depth - 1, pool + [v])})"
    if roll < 0.8:
        v = rng.choice([v for v in VARS if v not in pool] or ["W"])
        return f"forall {v} ({random_goal_text(rng, depth - 1, pool + [v])})"
    hyp = _dpart(rng, pool)
    inner = random_goal_text(rng, depth - 1, pool)
    if " " in hyp and not hyp.startswith("("):
        hyp = f"({hyp})"
    return f"{hyp} => ({inner})"


def random_pair(rng: random.Random):
    """A parsed (program, goal) pair."""
    program = parse_program(random_program_text(rng))
    goal = parse_goal(random_goal_text(rng, depth=rng.randint(1, 4)))
    return program, goal


def pairs(seed: int, count: int):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_pair(rng)


# ---------------------------------------------------------------------------
# Random proof shapes (for the flat-tree codec, which only reads arity/shape)

_DUMMY = Sequent(Program(()), None, Atom(Const("p")))
_LEAF_RULES = [Rule.FACT, Rule.BUILTIN]
_ONE_RULES = [Rule.SELECT, Rule.BACK_IMPLIES, Rule.BACK_ALL,
              Rule.IMPLIES, Rule.FORALL, Rule.EXISTS]


def random_shape(rng: random.Random, size: int) -> StructuredProof:
    """A structured proof with exactly `size` nodes and arbitrary shape."""
    assert size >= 1
    if size == 1:
        return StructuredProof(_DUMMY, rng.choice(_LEAF_RULES))
    if size == 2 or rng.random() < 0.5:
        return StructuredProof(_DUMMY, rng.choice(_ONE_RULES),
                               (random_shape(rng, size - 1),))
    left = rng.randint(1, size - 2)
    return StructuredProof(
        _DUMMY, Rule.AND,
        (random_shape(rng, left), random_shape(rng, size - 1 - left)))
