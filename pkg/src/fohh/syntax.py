"""Abstract syntax: terms, goal formulas, clause formulas, substitutions.

Two formula languages share one term language. Goal formulas (G) may use
conjunction, both quantifiers and hypothetical implication; clause formulas
(D) are universally closed facts and rules. A neutral "raw" tree is kept
around as well so that membership in either production can be decided for
arbitrary connective trees.

Bound occurrences inside formulas are represented as Var(name, level=0)
placeholders; quantifier instantiation replaces them. Machine-generated
variables get names containing '.', which the concrete syntax cannot
produce, so placeholders and runtime variables can never collide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    """A logic variable. level = how many goal universals were crossed at creation."""

    name: str
    level: int = 0


@dataclass(frozen=True)
class Param:
    """A rigid parameter standing for an arbitrary constant chosen later.

    Introduced when a universally quantified goal is reduced. Unification
    never binds a Param; only the execution environment may map one to the
    constant supplied by the user.
    """

    name: str
    level: int = 0


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("0-ary compound; use Const instead")

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Var, Param, Const, Int, Compound]


def is_atom(t: Term) -> bool:
    """Predicate-shaped terms: the only ones allowed as atomic formulas."""
    return isinstance(t, (Const, Compound))


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Compound):
        for a in t.args:
            yield from subterms(a)


def vars_of(t: Term) -> Iterator[Var]:
    for s in subterms(t):
        if isinstance(s, Var):
            yield s


def params_of(t: Term) -> Iterator[Param]:
    for s in subterms(t):
        if isinstance(s, Param):
            yield s


def is_ground(t: Term) -> bool:
    return not any(isinstance(s, (Var, Param)) for s in subterms(t))


# ---------------------------------------------------------------------------
# goal formulas


@dataclass(frozen=True)
class Atom:
    pred: Term  # Const or Compound

    def __post_init__(self) -> None:
        if not is_atom(self.pred):
            raise ValueError(f"not an atomic formula: {self.pred!r}")


@dataclass(frozen=True)
class And:
    left: "GFormula"
    right: "GFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "GFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "GFormula"


@dataclass(frozen=True)
class Implies:
    hyp: "DFormula"
    body: "GFormula"


GFormula = Union[Atom, And, Exists, Forall, Implies]


# ---------------------------------------------------------------------------
# clause formulas


@dataclass(frozen=True)
class Fact:
    head: Term

    def __post_init__(self) -> None:
        if not is_atom(self.head):
            raise ValueError(f"clause head must be atomic: {self.head!r}")


@dataclass(frozen=True)
class Clause:
    body: GFormula
    head: Term

    def __post_init__(self) -> None:
        if not is_atom(self.head):
            raise ValueError(f"clause head must be atomic: {self.head!r}")


@dataclass(frozen=True)
class All:
    var: str
    body: "DFormula"


DFormula = Union[Fact, Clause, All]


@dataclass(frozen=True)
class Program:
    """An ordered list of closed clause formulas. Order is selection order."""

    clauses: tuple[DFormula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(self.clauses))

    def extended(self, hyp: DFormula) -> "Program":
        # newest hypothesis first: it is tried before older clauses
        return Program((hyp,) + self.clauses)

    def __iter__(self) -> Iterator[DFormula]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)


# ---------------------------------------------------------------------------
# raw formulas and classification

# A raw tree makes no commitment to either production; classify() decides
# which productions accept it.


@dataclass(frozen=True)
class RawAtom:
    pred: Term


@dataclass(frozen=True)
class RawAnd:
    left: "Raw"
    right: "Raw"


@dataclass(frozen=True)
class RawImplies:
    left: "Raw"
    right: "Raw"


@dataclass(frozen=True)
class RawExists:
    var: str
    body: "Raw"


@dataclass(frozen=True)
class RawForall:
    var: str
    body: "Raw"


Raw = Union[RawAtom, RawAnd, RawImplies, RawExists, RawForall]


class Classification(Enum):
    G_ONLY = "G-only"
    D_ONLY = "D-only"
    BOTH = "both"
    NEITHER = "neither"


def _is_g(f: Raw) -> bool:
    if isinstance(f, RawAtom):
        return True
    if isinstance(f, RawAnd):
        return _is_g(f.left) and _is_g(f.right)
    if isinstance(f, (RawExists, RawForall)):
        return _is_g(f.body)
    if isinstance(f, RawImplies):
        return _is_d(f.left) and _is_g(f.right)
    return False


def _is_d(f: Raw) -> bool:
    if isinstance(f, RawAtom):
        return True
    if isinstance(f, RawImplies):
        return _is_g(f.left) and isinstance(f.right, RawAtom)
    if isinstance(f, RawForall):
        return _is_d(f.body)
    return False


def classify(f: Raw) -> Classification:
    g, d = _is_g(f), _is_d(f)
    if g and d:
        return Classification.BOTH
    if g:
        return Classification.G_ONLY
    if d:
        return Classification.D_ONLY
    return Classification.NEITHER


def to_raw(x: Union[GFormula, DFormula]) -> Raw:
    """Erase the G/D typing of a formula back to a raw connective tree."""
    if isinstance(x, Atom):
        return RawAtom(x.pred)
    if isinstance(x, And):
        return RawAnd(to_raw(x.left), to_raw(x.right))
    if isinstance(x, Exists):
        return RawExists(x.var, to_raw(x.body))
    if isinstance(x, Forall):
        return RawForall(x.var, to_raw(x.body))
    if isinstance(x, Implies):
        return RawImplies(to_raw(x.hyp), to_raw(x.body))
    if isinstance(x, Fact):
        return RawAtom(x.head)
    if isinstance(x, Clause):
        return RawImplies(to_raw(x.body), RawAtom(x.head))
    if isinstance(x, All):
        return RawForall(x.var, to_raw(x.body))
    raise TypeError(f"not a formula: {x!r}")


def to_goal(f: Raw) -> GFormula:
    """Read a raw tree as a goal formula; ValueError if the production rejects it."""
    if isinstance(f, RawAtom):
        return Atom(f.pred)
    if isinstance(f, RawAnd):
        return And(to_goal(f.left), to_goal(f.right))
    if isinstance(f, RawExists):
        return Exists(f.var, to_goal(f.body))
    if isinstance(f, RawForall):
        return Forall(f.var, to_goal(f.body))
    if isinstance(f, RawImplies):
        return Implies(to_clause(f.left), to_goal(f.right))
    raise ValueError(f"not a goal formula: {f!r}")


def to_clause(f: Raw) -> DFormula:
    """Read a raw tree as a clause formula; ValueError if the production rejects it."""
    if isinstance(f, RawAtom):
        return Fact(f.pred)
    if isinstance(f, RawForall):
        return All(f.var, to_clause(f.body))
    if isinstance(f, RawImplies) and isinstance(f.right, RawAtom):
        return Clause(to_goal(f.left), f.right.pred)
    raise ValueError(f"not a clause formula: {f!r}")


# ---------------------------------------------------------------------------
# substitutions

Bindable = Union[Var, Param]


class Substitution:
    """An immutable, idempotent finite map from variables to terms.

    Unification only ever binds Vars. Execution environments additionally
    bind Params to the constants the user supplied; both live here so that
    one apply() serves the prover, the executor and rendering.
    """

    __slots__ = ("_map",)

    def __init__(self, bindings: dict[Bindable, Term] | None = None):
        self._map: dict[Bindable, Term] = dict(bindings) if bindings else {}

    # -- mapping surface ----------------------------------------------------

    def get(self, key: Bindable) -> Term | None:
        return self._map.get(key)

    def items(self):
        return self._map.items()

    def domain(self) -> set[Bindable]:
        return set(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, key: Bindable) -> bool:
        return key in self._map

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __repr__(self) -> str:
        inner = ", ".join(f"{k.name}->{v}" for k, v in self._map.items())
        return f"Substitution({{{inner}}})"

    def extended(self, more: dict[Bindable, Term]) -> "Substitution":
        """Plain union; the caller is responsible for keeping idempotence."""
        out = dict(self._map)
        out.update(more)
        return Substitution(out)

    def restricted(self, keys) -> "Substitution":
        keep = set(keys)
        return Substitution({k: v for k, v in self._map.items() if k in keep})

    # -- application ---------------------------------------------------------

    def apply(self, x):
        """Simultaneous, capture-avoiding replacement on a term or formula."""
        if isinstance(x, (Var, Param, Const, Int, Compound)):
            return self._apply_term(x)
        if isinstance(x, (Atom, And, Exists, Forall, Implies)):
            return self._apply_g(self._map, x)
        if isinstance(x, (Fact, Clause, All)):
            return self._apply_d(self._map, x)
        if isinstance(x, Program):
            return Program(tuple(self._apply_d(self._map, c) for c in x.clauses))
        raise TypeError(f"cannot apply substitution to {x!r}")

    def _apply_term(self, t: Term, m: dict | None = None) -> Term:
        m = self._map if m is None else m
        if isinstance(t, (Var, Param)):
            return m.get(t, t)
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(self._apply_term(a, m) for a in t.args))
        return t

    def _apply_g(self, m: dict, f: GFormula) -> GFormula:
        if isinstance(f, Atom):
            return Atom(self._apply_term(f.pred, m))
        if isinstance(f, And):
            return And(self._apply_g(m, f.left), self._apply_g(m, f.right))
        if isinstance(f, Implies):
            return Implies(self._apply_d(m, f.hyp), self._apply_g(m, f.body))
        if isinstance(f, Exists):
            name, body, m2 = self._under_binder(m, f.var, f.body)
            return Exists(name, self._apply_g(m2, body))
        if isinstance(f, Forall):
            name, body, m2 = self._under_binder(m, f.var, f.body)
            return Forall(name, self._apply_g(m2, body))
        raise TypeError(f"not a goal formula: {f!r}")

    def _apply_d(self, m: dict, f: DFormula) -> DFormula:
        if isinstance(f, Fact):
            return Fact(self._apply_term(f.head, m))
        if isinstance(f, Clause):
            return Clause(self._apply_g(m, f.body), self._apply_term(f.head, m))
        if isinstance(f, All):
            name, body, m2 = self._under_binder(m, f.var, f.body)
            # body may be D here; _under_binder only rewrote placeholders
            return All(name, self._apply_d(m2, body))
        raise TypeError(f"not a clause formula: {f!r}")

    def _under_binder(self, m: dict, name: str, body):
        """Drop shadowed and inapplicable bindings; rename the binder only if
        a value actually substituted inside would read ambiguously."""
        occurring = set(carriers(body))
        m2 = {
            k: v
            for k, v in m.items()
            if k in occurring
            and not (isinstance(k, Var) and k.level == 0 and k.name == name)
        }
        if not m2:
            return name, body, m2
        placeholder = Var(name, 0)
        captures = any(
            placeholder in subterms(v)
            or any(p.name == name for p in params_of(v))
            for v in m2.values()
        )
        if not captures:
            return name, body, m2
        avoid = set(all_names(body))
        for v in m2.values():
            avoid.update(s.name for s in subterms(v) if isinstance(s, (Var, Param, Const)))
        fresh = name
        while fresh in avoid:
            fresh += "'"
        renamed = Substitution({placeholder: Var(fresh, 0)}).apply(body)
        return fresh, renamed, m2


def carriers(x) -> Iterator[Union["Var", "Param"]]:
    """Every Var and Param subterm occurring anywhere in x (terms or formulas)."""
    if isinstance(x, (Var, Param)):
        yield x
    elif isinstance(x, (Const, Int)):
        return
    elif isinstance(x, Compound):
        for a in x.args:
            yield from carriers(a)
    elif isinstance(x, Atom):
        yield from carriers(x.pred)
    elif isinstance(x, And):
        yield from carriers(x.left)
        yield from carriers(x.right)
    elif isinstance(x, Implies):
        yield from carriers(x.hyp)
        yield from carriers(x.body)
    elif isinstance(x, (Exists, Forall, All)):
        yield from carriers(x.body)
    elif isinstance(x, Fact):
        yield from carriers(x.head)
    elif isinstance(x, Clause):
        yield from carriers(x.body)
        yield from carriers(x.head)
    elif isinstance(x, Program):
        for c in x.clauses:
            yield from carriers(c)
    else:
        raise TypeError(f"no carriers in {x!r}")


def all_names(x) -> Iterator[str]:
    """Every variable, parameter, constant and binder name occurring in x."""
    if isinstance(x, (Var, Param, Const)):
        yield x.name
    elif isinstance(x, Compound):
        for a in x.args:
            yield from all_names(a)
    elif isinstance(x, Int):
        return
    elif isinstance(x, Atom):
        yield from all_names(x.pred)
    elif isinstance(x, And):
        yield from all_names(x.left)
        yield from all_names(x.right)
    elif isinstance(x, Implies):
        yield from all_names(x.hyp)
        yield from all_names(x.body)
    elif isinstance(x, (Exists, Forall, All)):
        yield x.var
        yield from all_names(x.body)
    elif isinstance(x, Fact):
        yield from all_names(x.head)
    elif isinstance(x, Clause):
        yield from all_names(x.body)
        yield from all_names(x.head)
    elif isinstance(x, Program):
        for c in x.clauses:
            yield from all_names(c)
    else:
        raise TypeError(f"no names in {x!r}")


def instantiate(name: str, replacement: Term, body):
    """Replace the bound placeholder `name` by `replacement` inside body."""
    return Substitution({Var(name, 0): replacement}).apply(body)


def replace_term(old: Term, new: Term, x):
    """Structurally replace every occurrence of the term `old` by `new`."""
    if old == new:
        return x
    if isinstance(x, (Var, Param, Const, Int, Compound)):
        if x == old:
            return new
        if isinstance(x, Compound):
            return Compound(x.functor, tuple(replace_term(old, new, a) for a in x.args))
        return x
    if isinstance(x, Atom):
        return Atom(replace_term(old, new, x.pred))
    if isinstance(x, And):
        return And(replace_term(old, new, x.left), replace_term(old, new, x.right))
    if isinstance(x, Exists):
        return Exists(x.var, replace_term(old, new, x.body))
    if isinstance(x, Forall):
        return Forall(x.var, replace_term(old, new, x.body))
    if isinstance(x, Implies):
        return Implies(replace_term(old, new, x.hyp), replace_term(old, new, x.body))
    if isinstance(x, Fact):
        return Fact(replace_term(old, new, x.head))
    if isinstance(x, Clause):
        return Clause(replace_term(old, new, x.body), replace_term(old, new, x.head))
    if isinstance(x, All):
        return All(x.var, replace_term(old, new, x.body))
    if isinstance(x, Program):
        return Program(tuple(replace_term(old, new, c) for c in x.clauses))
    raise TypeError(f"cannot rewrite {x!r}")


class BinderMismatch(Exception):
    """The instantiated copy does not match the binder body structurally."""


def binder_witness(name: str, body, instantiated) -> Term | None:
    """Recover the term a quantifier was instantiated with.

    Walks `body` (which still holds placeholders for `name`) against its
    instantiated copy; the term sitting where placeholders sat is returned.
    None when the binder is vacuous. BinderMismatch when the two sides do
    not line up, or different occurrences were filled differently.
    """
    found: list[Term] = []

    def terms(b: Term, i: Term) -> None:
        if isinstance(b, Var) and b.level == 0 and b.name == name:
            if not any(i == f for f in found):
                found.append(i)
            return
        if type(b) is not type(i):
            raise BinderMismatch(f"{b!r} vs {i!r}")
        if isinstance(b, Compound):
            if b.functor != i.functor or len(b.args) != len(i.args):
                raise BinderMismatch(f"{b!r} vs {i!r}")
            for x, y in zip(b.args, i.args):
                terms(x, y)
        elif b != i:
            raise BinderMismatch(f"{b!r} vs {i!r}")

    def walk(b, i) -> None:
        if type(b) is not type(i):
            raise BinderMismatch(f"{b!r} vs {i!r}")
        if isinstance(b, Atom):
            terms(b.pred, i.pred)
        elif isinstance(b, And):
            walk(b.left, i.left)
            walk(b.right, i.right)
        elif isinstance(b, Implies):
            walk(b.hyp, i.hyp)
            walk(b.body, i.body)
        elif isinstance(b, (Exists, Forall, All)):
            if b.var != i.var:
                raise BinderMismatch(f"{b!r} vs {i!r}")
            if b.var == name:
                # shadowed: no replacement happened below
                if b.body != i.body:
                    raise BinderMismatch(f"{b!r} vs {i!r}")
            else:
                walk(b.body, i.body)
        elif isinstance(b, Fact):
            terms(b.head, i.head)
        elif isinstance(b, Clause):
            walk(b.body, i.body)
            terms(b.head, i.head)
        else:
            raise TypeError(f"cannot match {b!r}")

    walk(body, instantiated)
    if not found:
        return None
    if len(found) > 1:
        raise BinderMismatch(f"inconsistent instances for {name}: {found}")
    return found[0]


# ---------------------------------------------------------------------------
# fresh names


class FreshNames:
    """Run-unique supply of variable and parameter names.

    Parameter names stay readable (the binder name, suffixed on reuse)
    because they surface in prompts. Variable names contain '.', which the
    tokenizer rejects, so they can never collide with source-level names.
    """

    def __init__(self) -> None:
        self._counter = itertools.count(1)
        self._params_taken: set[str] = set()

    def fresh_var(self, hint: str, level: int) -> Var:
        return Var(f"_{hint}.{next(self._counter)}", level)

    def fresh_param(self, hint: str, level: int) -> Param:
        name = hint
        while name in self._params_taken:
            name = f"{hint}_{next(self._counter)}"
        self._params_taken.add(name)
        return Param(name, level)
