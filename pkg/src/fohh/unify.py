"""First-order unification with occurs check and parameter scope levels.

Failures are ordinary outcomes, returned as values. The scope check keeps
search sound in the presence of rigid parameters: a variable created before
a parameter (lower level) must never receive a term mentioning it. When a
variable is bound to a term holding deeper variables, those are lowered to
the binder's level so the restriction cannot be laundered through chains
of variable-variable bindings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import Compound, Param, Substitution, Term, Var, params_of, vars_of

CLASH = "clash"
OCCURS = "occurs"
SCOPE = "scope"


@dataclass(frozen=True)
class Failure:
    reason: str  # clash | occurs | scope
    left: Term | None = None
    right: Term | None = None

    def __bool__(self) -> bool:
        return False


def compose(s1: Substitution, s2: Substitution) -> Substitution:
    """The substitution doing s1 first, then s2.

    apply(compose(s1, s2), t) == apply(s2, apply(s1, t)) for every term t.
    Identity bindings are dropped so composition stays tidy.
    """
    out: dict = {}
    for k, v in s1.items():
        v2 = s2.apply(v)
        if v2 != k:
            out[k] = v2
    for k, v in s2.items():
        if s1.get(k) is None:
            out[k] = v
    return Substitution(out)


def unify(t1: Term, t2: Term, subst: Substitution | None = None,
          occurs_check: bool = True) -> Substitution | Failure:
    """Most general unifier of t1 and t2 extending subst, or a Failure."""
    th = subst if subst is not None else Substitution()
    return _unify(t1, t2, th, occurs_check)


def _unify(a: Term, b: Term, th: Substitution, oc: bool) -> Substitution | Failure:
    a = th.apply(a)
    b = th.apply(b)
    if a == b:
        return th
    if isinstance(a, Var) and isinstance(b, Var):
        # bind the younger (deeper) variable so levels only ever go down
        if a.level >= b.level:
            return _bind(a, b, th, oc)
        return _bind(b, a, th, oc)
    if isinstance(a, Var):
        return _bind(a, b, th, oc)
    if isinstance(b, Var):
        return _bind(b, a, th, oc)
    if (
        isinstance(a, Compound)
        and isinstance(b, Compound)
        and a.functor == b.functor
        and len(a.args) == len(b.args)
    ):
        for x, y in zip(a.args, b.args):
            th = _unify(x, y, th, oc)
            if isinstance(th, Failure):
                return th
        return th
    # distinct constants, ints, params, or mismatched shapes
    return Failure(CLASH, a, b)


def _bind(v: Var, t: Term, th: Substitution, oc: bool) -> Substitution | Failure:
    if oc and any(w == v for w in vars_of(t)):
        return Failure(OCCURS, v, t)
    if any(p.level > v.level for p in params_of(t)):
        return Failure(SCOPE, v, t)
    new: dict = {w: Var(w.name, v.level) for w in set(vars_of(t)) if w.level > v.level}
    if new:
        t = Substitution(new).apply(t)
    new[v] = t
    return compose(th, Substitution(new))
