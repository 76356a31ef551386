"""Command-line interface: prove a goal, then replay the proof interactively.

Exit codes: 0 proved and replay completed; 1 no proof found; 2 replay stopped
(residual violation or aborted input); 3 usage, file, or syntax errors.
"""

from __future__ import annotations

import argparse
import sys

from .executor import ExecutionStatus, InputDeclined, execute
from .parser import ParseError, parse_goal, parse_program, parse_term, render
from .prooftree import serialize, to_cons_list
from .prover import SearchLimits, prove_tree
from .syntax import Param, Program, Term


class InteractiveProvider:
    """Prompts on stdin; shows the paused sequent when verbose."""

    def __init__(self, verbose: bool = False):
        self.verbose = verbose

    def request(self, param: Param, prompt: str, node_index: int) -> Term:
        if self.verbose:
            print(f"read at node {node_index}: {prompt}")
        while True:
            try:
                line = input(f"{param.name} ? ")
            except EOFError:
                raise InputDeclined("end of input") from None
            if not line.strip():
                continue
            try:
                return parse_term(line)
            except ParseError as e:
                print(f"cannot read that ({e}); try again", file=sys.stderr)


class EchoScriptProvider:
    """Feeds reads from a list of lines, echoing each as `name ? value`."""

    def __init__(self, lines: list[str]):
        self.lines = [ln.strip() for ln in lines if ln.strip()]
        self.next = 0

    def request(self, param: Param, prompt: str, node_index: int) -> Term:
        if self.next >= len(self.lines):
            raise InputDeclined("script exhausted")
        line = self.lines[self.next]
        self.next += 1
        try:
            value = parse_term(line)
        except ParseError as e:
            raise InputDeclined(f"unreadable script line {line!r}: {e}") from e
        print(f"{param.name} ? {render(value)}")
        return value


def _load_program(path: str) -> Program:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SystemExit(_usage_error(f"cannot read {path}: {e.strerror or e}"))
    return parse_program(text)


def _usage_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 3


def _prove(args) -> tuple[int, object, Program]:
    try:
        program = _load_program(args.program)
        goal = parse_goal(args.goal)
    except ParseError as e:
        return _usage_error(str(e)), None, None
    limits = SearchLimits(max_depth=args.depth)
    outcome = prove_tree(program, goal, limits)
    if not outcome.succeeded:
        suffix = " (depth limit reached)" if outcome.depth_exceeded else ""
        print(f"no.{suffix}")
        return 1, None, None
    print(f"proved. {outcome.tree.n} nodes.")
    return 0, outcome, program


def cmd_run(args) -> int:
    code, outcome, _program = _prove(args)
    if code != 0:
        return code
    tree = outcome.tree
    if args.show_tree:
        print(serialize(tree))
    if args.show_list:
        print(to_cons_list(tree))
    if args.no_exec:
        return 0

    if args.script is not None:
        try:
            with open(args.script, encoding="utf-8") as f:
                lines = f.read().splitlines()
        except OSError as e:
            return _usage_error(f"cannot read {args.script}: {e.strerror or e}")
        provider = EchoScriptProvider(lines)
    elif args.read:
        provider = EchoScriptProvider(list(args.read))
    else:
        provider = InteractiveProvider(verbose=args.verbose)

    trace = (lambda i, rule: print(f"visit {i}")) if args.trace else None
    result = execute(tree, provider, trace=trace)
    if result.status == ExecutionStatus.COMPLETED:
        for name, value in result.witnesses:
            print(f"{name} = {render(value)}")
        print("yes.")
        return 0
    if result.status == ExecutionStatus.RESIDUAL_VIOLATION:
        print(f"violation at node {result.violation_index}.")
        return 2
    print("aborted.")
    return 2


def cmd_tree(args) -> int:
    code, outcome, _program = _prove(args)
    if code != 0:
        return code
    print(serialize(outcome.tree))
    if args.show_list:
        print(to_cons_list(outcome.tree))
    return 0


def cmd_serve(args) -> int:
    from .service import serve_stdio, serve_tcp

    if args.stdio:
        serve_stdio()
        return 0
    return serve_tcp(args.host, args.port)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fohh",
        description="Prove goals over hereditary Harrop programs, then replay "
        "the proof tree interactively.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_prove_args(p):
        p.add_argument("program", help="program file (clauses ending in '.')")
        p.add_argument("-g", "--goal", required=True, help="goal formula to prove")
        p.add_argument("--depth", type=int, default=64, help="proof search depth bound")

    run = sub.add_parser("run", help="prove a goal and replay the proof")
    add_prove_args(run)
    run.add_argument("--read", action="append", default=[], metavar="TERM",
                     help="scripted answer for the next read (repeatable)")
    run.add_argument("--script", metavar="FILE",
                     help="file of scripted read answers, one term per line")
    run.add_argument("--trace", action="store_true", help="print visited node indexes")
    run.add_argument("--show-tree", action="store_true",
                     help="print the flat proof tree before replay")
    run.add_argument("--show-list", action="store_true",
                     help="print the proof tree as one offset-annotated list")
    run.add_argument("--no-exec", action="store_true", help="stop after proving")
    run.add_argument("-v", "--verbose", action="store_true",
                     help="show the paused sequent at each interactive read")
    run.set_defaults(fn=cmd_run)

    tree = sub.add_parser("tree", help="prove a goal and print the flat proof tree")
    add_prove_args(tree)
    tree.add_argument("--show-list", action="store_true",
                      help="also print the offset-annotated list form")
    tree.set_defaults(fn=cmd_tree)

    serve = sub.add_parser("serve", help="run the line-delimited JSON session service")
    serve.add_argument("--stdio", action="store_true", help="serve one session on stdio")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=0, help="TCP port (0 picks one)")
    serve.set_defaults(fn=cmd_serve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:  # raised by _load_program with a code
        if isinstance(e.code, int):
            return e.code
        raise
    except KeyboardInterrupt:
        print("aborted.", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
