"""First-order hereditary Harrop interpreter with two-phase execution.

Phase one proves a goal by uniform proof search, accepting arithmetic and
comparison atoms symbolically, and records the proof as a flat offset-encoded
array. Phase two replays that array top-down, pausing at universally
quantified goals to request constants from an input provider, and finally
settles the recorded builtin constraints.

Typical use:

    from fohh import parse_program, parse_goal, prove_tree, execute, ScriptedProvider

    program = parse_program("cube(X, Y) :- nat(X), Y is X * X * X.")
    outcome = prove_tree(program, parse_goal("forall X (exists Y (cube(X, Y)))"))
    result = execute(outcome.tree, ScriptedProvider("5"))
    assert [(n, v) for n, v in result.witnesses] == [("Y", Int(125))]
"""

from .builtins import EvalError, Residual, ResidualKind, eval_arith, is_builtin_functor
from .executor import (
    ExecutionResult,
    ExecutionStatus,
    InputDeclined,
    InputProvider,
    MalformedTreeError,
    ReadEvent,
    ScriptedProvider,
    execute,
)
from .parser import LoadError, ParseError, parse_goal, parse_program, parse_term, render
from .prooftree import (
    FlatNode,
    FlatProofTree,
    Violation,
    flatten,
    render_sequent,
    serialize,
    serialize_lines,
    to_cons_list,
    unflatten,
    validate,
)
from .prover import (
    Answers,
    Rule,
    SearchLimits,
    Sequent,
    StructuredProof,
    TreeOutcome,
    iter_proofs,
    prove_tree,
    solve,
)
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
    Substitution,
    Term,
    Var,
)
from .unify import Failure, compose, unify

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # terms and formulas
    "Term", "Var", "Param", "Const", "Int", "Compound",
    "GFormula", "Atom", "And", "Exists", "Forall", "Implies",
    "DFormula", "Fact", "Clause", "All", "Program", "Substitution",
    # parsing and rendering
    "parse_program", "parse_goal", "parse_term", "render",
    "ParseError", "LoadError",
    # unification
    "unify", "compose", "Failure",
    # builtins
    "Residual", "ResidualKind", "eval_arith", "EvalError", "is_builtin_functor",
    # proof search
    "solve", "iter_proofs", "prove_tree", "Answers", "TreeOutcome",
    "Rule", "Sequent", "StructuredProof", "SearchLimits",
    # flat proof trees
    "FlatProofTree", "FlatNode", "flatten", "unflatten", "validate", "Violation",
    "serialize", "serialize_lines",
    "render_sequent", "to_cons_list",
    # execution
    "execute", "ExecutionResult", "ExecutionStatus", "ReadEvent",
    "InputProvider", "InputDeclined", "ScriptedProvider", "MalformedTreeError",
]
