"""Flat, offset-encoded proof trees.

A structured proof is stored postorder in an array T[1..n] with the root at
T[n]. Each node carries relative child offsets instead of pointers:

  Leaf        no children
  One(d)      child root at i - d; postorder forces d = 1
  Two(d0,d1)  conjunction; layout is [left block, right block, parent], so
              the right conjunct's root is at i - d0 with d0 = 1 and the
              left conjunct's root is at i - d1 with d1 = size(right) + 1

children(i) lists the left conjunct first, matching execution order.
Reading the array from n down to 1 gives the cons-list presentation with
the root at its head.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .builtins import Residual
from .parser import render
from .prover import RULE_ARITY, Rule, Sequent, StructuredProof
from .syntax import All, Fact, Program

Offsets = Union[None, tuple[int], tuple[int, int]]


@dataclass(frozen=True)
class FlatNode:
    sequent: Sequent
    rule: Rule
    offsets: Offsets
    residual: Residual | None = None


@dataclass(frozen=True)
class Violation:
    kind: str  # out_of_bounds | arity | offset | overlap | gap | unreachable
    index: int
    detail: str


@dataclass(frozen=True)
class FlatProofTree:
    nodes: tuple[FlatNode, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def n(self) -> int:
        return len(self.nodes)

    def node(self, i: int) -> FlatNode:
        """1-based access; the root is node(n)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"node index {i} out of range 1..{self.n}")
        return self.nodes[i - 1]

    def children(self, i: int) -> list[int]:
        """Child indices of node i, left conjunct first for pairs."""
        nd = self.node(i)
        if nd.offsets is None:
            return []
        if len(nd.offsets) == 1:
            return [i - nd.offsets[0]]
        d0, d1 = nd.offsets
        return [i - d1, i - d0]

    def block(self, i: int) -> tuple[int, int]:
        """The index range (lo, hi) of the subtree rooted at node i."""
        lo = i
        for c in self.children(i):
            lo = min(lo, self.block(c)[0])
        return lo, i


def flatten(proof: StructuredProof) -> FlatProofTree:
    """Postorder-encode a structured proof; asserts the rule-arity invariant."""
    out: list[FlatNode] = []

    def walk(p: StructuredProof) -> int:
        want = RULE_ARITY[p.rule]
        if len(p.children) != want:
            raise ValueError(
                f"rule {p.rule.value} expects {want} children, got {len(p.children)}"
            )
        if want == 0:
            out.append(FlatNode(p.node, p.rule, None, p.residual))
            return 1
        if want == 1:
            size = walk(p.children[0])
            out.append(FlatNode(p.node, p.rule, (1,), p.residual))
            return size + 1
        size0 = walk(p.children[0])
        size1 = walk(p.children[1])
        out.append(FlatNode(p.node, p.rule, (1, size1 + 1), p.residual))
        return size0 + size1 + 1

    walk(proof)
    return FlatProofTree(tuple(out))


def unflatten(tree: FlatProofTree) -> StructuredProof:
    """Rebuild the structured proof; inverse of flatten on valid trees."""

    def build(i: int) -> StructuredProof:
        nd = tree.node(i)
        kids = tuple(build(c) for c in tree.children(i))
        return StructuredProof(nd.sequent, nd.rule, kids, nd.residual)

    return build(tree.n)


def validate(tree: FlatProofTree) -> list[Violation]:
    """Check offsets, tiling and reachability; violations are data, not faults."""
    out: list[Violation] = []
    n = tree.n
    if n == 0:
        return [Violation("gap", 0, "empty tree")]
    visited: set[int] = set()

    def walk(i: int) -> Optional[int]:
        """Returns the block start of node i, or None if too broken to size."""
        if i in visited:
            out.append(Violation("overlap", i, "node claimed by two parents"))
            return None
        visited.add(i)
        nd = tree.nodes[i - 1]
        want = RULE_ARITY[nd.rule]
        have = 0 if nd.offsets is None else len(nd.offsets)
        if want != have:
            out.append(Violation("arity", i,
                                 f"rule {nd.rule.value} with {have}-child offsets"))
            return None
        if nd.offsets is None:
            return i
        for d in nd.offsets:
            if d < 1 or i - d < 1:
                out.append(Violation("out_of_bounds", i, f"offset {d}"))
                return None
        if len(nd.offsets) == 1:
            (d,) = nd.offsets
            if d != 1:
                out.append(Violation("offset", i, f"single child at distance {d}"))
                return None
            return walk(i - 1)
        d0, d1 = nd.offsets
        if d0 != 1:
            out.append(Violation("offset", i, f"right child at distance {d0}"))
            return None
        lo1 = walk(i - d0)
        if lo1 is None:
            return None
        if i - d1 != lo1 - 1:
            out.append(Violation("gap", i,
                                 f"left child at {i - d1}, right block starts at {lo1}"))
            return None
        return walk(i - d1)

    lo = walk(n)
    if lo is not None and lo != 1:
        # a clean walk covers a contiguous block, so everything below it
        # is stranded
        out.append(Violation("gap", n, f"root block starts at {lo}, not 1"))
        for i in range(1, lo):
            out.append(Violation("unreachable", i, "not reachable from the root"))
    return out


# ---------------------------------------------------------------------------
# rendering


def render_sequent(seq: Sequent, base: Program | None = None) -> str:
    """Display form: hypotheses and a base-program symbol, then the goal.

    When the context ends with the clauses of `base`, those are abbreviated
    to the program symbol; hypotheses added on the way in stay explicit.
    """
    parts: list[str] = []
    clauses = seq.context.clauses
    if base is not None and len(base.clauses) <= len(clauses) \
            and clauses[len(clauses) - len(base.clauses):] == base.clauses:
        own = clauses[: len(clauses) - len(base.clauses)]
        ctx = ",".join(_hyp_inline(c) for c in own)
        ctx = f"{ctx},P" if ctx else "P"
    else:
        ctx = "{" + " ".join(_dformula_inline(c) + "." for c in clauses) + "}"
    if seq.focus is not None:
        parts.append(f"{_dformula_inline(seq.focus)};")
    parts.append(ctx)
    parts.append(" |- ")
    parts.append(render(seq.goal))
    return "".join(parts)


def _dformula_inline(d) -> str:
    """Clause display with quantifiers explicit, so halfway-instantiated
    focused clauses stay distinguishable from their originals."""
    if isinstance(d, All):
        return f"forall {d.var} ({_dformula_inline(d.body)})"
    if isinstance(d, Fact):
        return render(d.head)
    return f"{render(d.head)} :- {render(d.body)}"


def _hyp_inline(d) -> str:
    s = _dformula_inline(d)
    return s if isinstance(d, Fact) else f"({s})"


def to_cons_list(tree: FlatProofTree, base: Program | None = None) -> str:
    """The cons-list presentation, root first: ⟨E,off⟩::...::nil."""
    if base is None:
        base = tree.node(tree.n).sequent.context
    cells = []
    for i in range(tree.n, 0, -1):
        nd = tree.node(i)
        cells.append(f"⟨{render_sequent(nd.sequent, base)},{_offsets_str(nd.offsets)}⟩")
    return "::".join(cells) + "::nil"


def _offsets_str(off: Offsets) -> str:
    if off is None:
        return "-"
    if len(off) == 1:
        return str(off[0])
    return f"({off[0]},{off[1]})"


def serialize_lines(tree: FlatProofTree, base: Program | None = None) -> list[str]:
    """One line per node: index, rule tag, offsets, rendered sequent."""
    if base is None and tree.n:
        base = tree.node(tree.n).sequent.context
    return [
        f"{i}\t{nd.rule.value}\t{_offsets_str(nd.offsets)}\t{render_sequent(nd.sequent, base)}"
        for i, nd in enumerate(tree.nodes, start=1)
    ]


def serialize(tree: FlatProofTree, base: Program | None = None) -> str:
    return "\n".join(serialize_lines(tree, base))
