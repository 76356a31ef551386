"""Flat proof trees: offsets, validation, display, serialization."""

import random

import pytest

from fohh import (
    Atom,
    Compound,
    Const,
    Fact,
    FlatNode,
    FlatProofTree,
    Program,
    Rule,
    Sequent,
    StructuredProof,
    flatten,
    parse_goal,
    parse_program,
    prove_tree,
    render_sequent,
    serialize,
    serialize_lines,
    to_cons_list,
    unflatten,
    validate,
)

import corpus
import oracles


def c(functor, *args):
    return Compound(functor, args)


def tree_for(program_text: str, goal_text: str) -> FlatProofTree:
    outcome = prove_tree(parse_program(program_text), parse_goal(goal_text))
    assert outcome.succeeded
    return outcome.tree


class TestKnownArrays:
    def test_conjunction_of_two_facts_gives_the_known_five_node_array(self):
        """Frozen layout for {a. b.} proving `a, b`: two select/fact blocks,
        then the conjunction with offsets (1, 3)."""
        tree = tree_for("a. b.", "a, b")
        assert tree.n == 5
        a, b = Atom(Const("a")), Atom(Const("b"))
        base = parse_program("a. b.")

        assert tree.node(1).rule == Rule.FACT
        assert tree.node(1).offsets is None
        assert tree.node(1).sequent == Sequent(base, Fact(Const("a")), a)

        assert tree.node(2).rule == Rule.SELECT
        assert tree.node(2).offsets == (1,)
        assert tree.node(2).sequent == Sequent(base, None, a)

        assert tree.node(3).rule == Rule.FACT
        assert tree.node(3).sequent == Sequent(base, Fact(Const("b")), b)

        assert tree.node(4).rule == Rule.SELECT
        assert tree.node(4).offsets == (1,)

        assert tree.node(5).rule == Rule.AND
        assert tree.node(5).offsets == (1, 3)
        assert tree.children(5) == [2, 4]

    def test_single_select_chain_offsets_are_one(self):
        tree = tree_for("p.", "p")
        assert [tree.node(i).offsets for i in range(1, 3)] == [None, (1,)]
        assert tree.children(2) == [1]

    def test_blocks_tile_the_array(self):
        tree = tree_for("a. b. c.", "(a, b), c")
        left_root, right_root = tree.children(tree.n)
        lo_l, hi_l = tree.block(left_root)
        lo_r, hi_r = tree.block(right_root)
        assert (lo_l, hi_l) == (1, 5)
        assert (lo_r, hi_r) == (6, 7)
        assert tree.n == 8


class TestCodec:
    def test_round_trip_on_real_proofs(self):
        for program_text, goal_text in [
            ("p.", "p"),
            ("a. b.", "a, b"),
            ("p(X).", "forall Y (exists X (p(g(X, Y))))"),
            ("cube(X, Y) :- nat(X), Y is X * X * X.",
             "forall X (exists Y (nat(X) => cube(X, Y)))"),
        ]:
            tree = tree_for(program_text, goal_text)
            assert flatten(unflatten(tree)).nodes == tree.nodes
            assert validate(tree) == []

    def test_round_trip_on_random_shapes(self):
        rng = random.Random(92)
        for _ in range(200):
            proof = corpus.random_shape(rng, rng.randint(1, 40))
            tree = flatten(proof)
            assert unflatten(tree) == proof
            assert validate(tree) == []

    def test_flatten_agrees_with_the_independent_flattener(self):
        rng = random.Random(93)
        for _ in range(200):
            proof = corpus.random_shape(rng, rng.randint(1, 40))
            ours = [(n.sequent, n.rule, n.offsets, n.residual)
                    for n in flatten(proof).nodes]
            assert ours == oracles.flatten_alt(proof)

    def test_indexes_are_one_based(self):
        tree = tree_for("p.", "p")
        with pytest.raises(IndexError):
            tree.node(0)
        with pytest.raises(IndexError):
            tree.node(3)

    def test_arity_mismatch_is_rejected_at_flatten_time(self):
        leaf = StructuredProof(corpus._DUMMY, Rule.FACT)
        bad = StructuredProof(corpus._DUMMY, Rule.AND, (leaf,))
        with pytest.raises(ValueError, match="expects 2"):
            flatten(bad)


class TestValidation:
    def _nodes(self, program_text: str, goal_text: str):
        return list(tree_for(program_text, goal_text).nodes)

    def test_valid_trees_have_no_findings(self):
        assert validate(tree_for("a. b.", "a, b")) == []

    def test_offset_out_of_bounds(self):
        nodes = self._nodes("p.", "p")
        nodes[1] = FlatNode(nodes[1].sequent, nodes[1].rule, (5,))
        findings = validate(FlatProofTree(tuple(nodes)))
        assert any(f.kind == "out_of_bounds" for f in findings)

    def test_unary_offset_must_be_one(self):
        nodes = self._nodes("a. b. c.", "a, (b, c)")
        # point the root's left child chain somewhere legal but non-adjacent
        i = next(k for k, nd in enumerate(nodes) if nd.rule == Rule.SELECT)
        bad = FlatNode(nodes[i + 1].sequent, nodes[i + 1].rule, (2,))
        nodes[i + 1] = bad
        findings = validate(FlatProofTree(tuple(nodes)))
        assert findings  # offset, overlap, or gap depending on position

    def test_conjunction_blocks_must_be_adjacent(self):
        nodes = self._nodes("a. b.", "a, b")
        root = nodes[-1]
        nodes[-1] = FlatNode(root.sequent, root.rule, (1, 2))
        findings = validate(FlatProofTree(tuple(nodes)))
        assert any(f.kind in {"gap", "overlap", "offset"} for f in findings)

    def test_double_pointed_children_are_detected(self):
        nodes = self._nodes("a. b.", "a, b")
        root = nodes[-1]
        # both child offsets hit the right block, stranding the left
        nodes[-1] = FlatNode(root.sequent, root.rule, (1, 1))
        findings = validate(FlatProofTree(tuple(nodes)))
        assert any(f.kind in {"gap", "overlap", "unreachable"} for f in findings)

    def test_unreachable_nodes_are_reported(self):
        leaf = FlatNode(corpus._DUMMY, Rule.FACT, None)
        stranded = FlatProofTree((leaf, leaf, FlatNode(corpus._DUMMY, Rule.SELECT, (1,))))
        findings = validate(stranded)
        assert any(f.kind == "unreachable" and f.index == 1 for f in findings)

    def test_leaf_with_offsets_is_an_arity_finding(self):
        nodes = self._nodes("p.", "p")
        nodes[0] = FlatNode(nodes[0].sequent, nodes[0].rule, (1,))
        findings = validate(FlatProofTree(tuple(nodes)))
        assert any(f.kind == "arity" for f in findings)


class TestDisplay:
    def test_base_context_abbreviates(self):
        tree = tree_for("p.", "p")
        root = tree.node(tree.n)
        assert render_sequent(root.sequent, root.sequent.context) == "P |- p"

    def test_hypotheses_stay_visible(self):
        tree = tree_for("", "q(a) => q(a)")
        base = tree.node(tree.n).sequent.context
        line = render_sequent(tree.node(2).sequent, base)
        assert line == "q(a),P |- q(a)"

    def test_focused_clauses_show_their_remaining_quantifiers(self):
        tree = tree_for("eq(Z, Z).", "exists X (eq(f(X), f(a)))")
        base = tree.node(tree.n).sequent.context
        lines = [render_sequent(tree.node(i).sequent, base)
                 for i in range(1, tree.n + 1)]
        assert any(line.startswith("forall Z (eq(Z, Z));") for line in lines)
        assert any(line.startswith("eq(f(a), f(a));") for line in lines)

    def test_without_a_base_the_context_is_spelled_out(self):
        tree = tree_for("p.", "p")
        assert render_sequent(tree.node(2).sequent) == "{p.} |- p"

    def test_serialized_lines_are_tab_separated(self):
        tree = tree_for("p.", "p")
        lines = serialize_lines(tree)
        assert lines == ["1\t1\t-\tp;P |- p", "2\t4\t1\tP |- p"]
        assert serialize(tree) == "\n".join(lines)

    def test_list_form_starts_at_the_root_and_ends_in_nil(self):
        tree = tree_for("p.", "p")
        s = to_cons_list(tree)
        assert s == "⟨P |- p,1⟩::⟨p;P |- p,-⟩::nil"
