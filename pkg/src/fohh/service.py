"""Line-delimited JSON session service over stdio or TCP.

One session drives the two-phase pipeline for a remote client. Requests are
single-line JSON objects with an "op" field; every server message is a
single-line JSON object with an "event" field.

Requests:
  {"op": "load", "program": "<clause text>"}
  {"op": "query", "goal": "<goal text>", "depth"?: int, "trace"?: bool}
  {"op": "read_reply", "value": "<term text>"}
  {"op": "abort"}
  {"op": "quit"}

Events:
  hello {service, version}     once, on connect
  loaded {clauses}             program accepted
  tree {n, lines}              proof found; lines are the serialized tree
  visit {node}                 replay trace (only when the query asked for it)
  read_request {param, prompt, node}
  result {status, witnesses, reads, violation_node}
  failed {reason, depth_exceeded}
  error {kind, message}        kind: parse | protocol | state | internal
  bye                          session closing

read_reply frames may be pipelined ahead of their read_request; they queue in
order. A new load/query is accepted as soon as the previous query's outcome
frame (result, failed, or internal error) has been written, even if its worker
is still winding down.
"""

from __future__ import annotations

import io
import json
import queue
import socketserver
import sys
import threading

from . import __version__
from .executor import InputDeclined, execute
from .parser import ParseError, parse_goal, parse_program, parse_term, render
from .prooftree import serialize_lines
from .prover import SearchLimits, prove_tree
from .syntax import Param, Term

_ABORT = object()


class _QueueProvider:
    def __init__(self, session: "Session"):
        self.session = session

    def request(self, param: Param, prompt: str, node_index: int) -> Term:
        s = self.session
        s.emit(event="read_request", param=param.name, prompt=prompt, node=node_index)
        value = s.replies.get()
        if value is _ABORT:
            raise InputDeclined("aborted by client")
        return value


class Session:
    """One client's protocol loop; replay runs on a worker thread."""

    def __init__(self, rfile, wfile):
        self.rfile = rfile
        self.wfile = wfile
        self.wlock = threading.Lock()
        self.program = None
        self.worker: threading.Thread | None = None
        self.delivered = threading.Event()  # set once the outcome frame is written
        self.replies: queue.Queue = queue.Queue()

    # -- output ------------------------------------------------------------

    def emit(self, **frame) -> None:
        line = json.dumps(frame, separators=(",", ":")) + "\n"
        with self.wlock:
            try:
                self.wfile.write(line)
                self.wfile.flush()
            except (BrokenPipeError, ValueError, OSError):
                pass

    def error(self, kind: str, message: str) -> None:
        self.emit(event="error", kind=kind, message=message)

    # -- lifecycle ----------------------------------------------------------

    def run(self) -> None:
        self.emit(event="hello", service="fohh", version=__version__)
        for raw in self.rfile:
            if not raw.strip():
                continue
            try:
                frame = json.loads(raw)
                op = frame["op"]
            except (json.JSONDecodeError, KeyError, TypeError):
                self.error("protocol", "each request is a JSON object with an 'op' field")
                continue
            if op == "quit":
                self._stop_worker()
                self.emit(event="bye")
                break
            handler = getattr(self, f"op_{op}", None)
            if handler is None:
                self.error("protocol", f"unknown op {op!r}")
                continue
            handler(frame)
        self._stop_worker()

    def _running(self) -> bool:
        """A replay worker still owns the session (outcome not yet sent)."""
        w = self.worker
        if w is None or not w.is_alive():
            return False
        if self.delivered.is_set():
            w.join(timeout=2.0)  # outcome is on the wire; wait out the exit
            return w.is_alive()
        return True

    def _settled(self) -> bool:
        """Like `not _running()`, but absorbs the tail of a finishing replay
        so a client that just received its result is never rejected."""
        if not self._running():
            return True
        self.worker.join(timeout=0.05)
        return not self._running()

    def _stop_worker(self) -> None:
        if self._running():
            self.replies.put(_ABORT)
            self.worker.join(timeout=2.0)

    # -- request handlers ----------------------------------------------------

    def op_load(self, frame) -> None:
        if not self._settled():
            self.error("state", "cannot load while a query is running")
            return
        try:
            program = parse_program(str(frame.get("program", "")))
        except ParseError as e:
            self.error("parse", str(e))
            return
        self.program = program
        self.emit(event="loaded", clauses=len(program))

    def op_query(self, frame) -> None:
        if not self._settled():
            self.error("state", "a query is already running")
            return
        if self.program is None:
            self.error("state", "no program loaded")
            return
        try:
            goal = parse_goal(str(frame.get("goal", "")))
        except ParseError as e:
            self.error("parse", str(e))
            return
        depth = frame.get("depth", 64)
        if not isinstance(depth, int) or depth < 1:
            self.error("protocol", "depth must be a positive integer")
            return
        trace = bool(frame.get("trace", False))
        outcome = prove_tree(self.program, goal, SearchLimits(max_depth=depth))
        if not outcome.succeeded:
            self.emit(event="failed", reason="no_proof",
                      depth_exceeded=outcome.depth_exceeded)
            return
        tree = outcome.tree
        self.emit(event="tree", n=tree.n, lines=serialize_lines(tree))
        while not self.replies.empty():  # drop stale replies from a past query
            try:
                self.replies.get_nowait()
            except queue.Empty:
                break
        done = threading.Event()
        self.delivered = done
        self.worker = threading.Thread(
            target=self._replay, args=(tree, trace, done), daemon=True)
        self.worker.start()

    def _replay(self, tree, trace: bool, done: threading.Event) -> None:
        cb = (lambda i, rule: self.emit(event="visit", node=i)) if trace else None
        try:
            try:
                result = execute(tree, _QueueProvider(self), trace=cb)
            except Exception as e:  # keep the session alive on internal faults
                self.error("internal", f"{type(e).__name__}: {e}")
                return
            self.emit(
                event="result",
                status=result.status.value,
                witnesses=[[name, render(t)] for name, t in result.witnesses],
                reads=[[ev.param.name, render(ev.value), ev.node_index]
                       for ev in result.reads],
                violation_node=result.violation_index,
            )
        finally:
            done.set()  # after the terminal frame: joiners never miss it

    def op_read_reply(self, frame) -> None:
        if not self._running():
            self.error("state", "no query is running")
            return
        try:
            value = parse_term(str(frame.get("value", "")))
        except ParseError as e:
            self.error("parse", str(e))
            return
        self.replies.put(value)

    def op_abort(self, frame) -> None:
        if not self._running():
            self.error("state", "no query is running")
            return
        self.replies.put(_ABORT)


def serve_stdio() -> None:
    Session(sys.stdin, sys.stdout).run()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        rfile = io.TextIOWrapper(self.rfile, encoding="utf-8")
        wfile = io.TextIOWrapper(self.wfile, encoding="utf-8")
        Session(rfile, wfile).run()
        try:
            wfile.flush()
        except (ValueError, OSError):
            pass


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def serve_tcp(host: str, port: int) -> int:
    with _Server((host, port), _Handler) as server:
        actual = server.server_address[1]
        print(f"listening {host}:{actual}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0
