"""Session service: protocol frames, state handling, transports."""

import io
import json
import socket
import threading

from fohh.service import Session, serve_tcp

CUBE = "cube(X, Y) :- nat(X), Y is X * X * X."
CUBE_GOAL = "forall X (exists Y (nat(X) => cube(X, Y)))"


def drive(*frames):
    """Feed request frames to one session; return the emitted events."""
    rfile = io.StringIO("".join(json.dumps(f) + "\n" for f in frames))
    wfile = io.StringIO()
    Session(rfile, wfile).run()
    return [json.loads(line) for line in wfile.getvalue().splitlines()]


def events(log):
    return [e["event"] for e in log]


class TestSessions:
    def test_full_cube_session(self):
        log = drive(
            {"op": "load", "program": CUBE},
            {"op": "query", "goal": CUBE_GOAL},
            {"op": "read_reply", "value": "5"},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "tree", "read_request",
                               "result", "bye"]
        assert log[1]["clauses"] == 1
        assert log[2]["n"] == 10
        assert len(log[2]["lines"]) == 10
        assert log[3]["param"] == "X" and log[3]["node"] == 10
        assert log[4]["status"] == "completed"
        assert log[4]["witnesses"] == [["Y", "125"]]
        assert log[4]["reads"] == [["X", "5", 10]]

    def test_trace_events_interleave(self):
        log = drive(
            {"op": "load", "program": "p."},
            {"op": "query", "goal": "p", "trace": True},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "tree", "visit", "visit",
                               "result", "bye"]
        assert [e["node"] for e in log if e["event"] == "visit"] == [2, 1]

    def test_unprovable_goals_fail_without_a_tree(self):
        log = drive(
            {"op": "load", "program": "p."},
            {"op": "query", "goal": "q"},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "failed", "bye"]
        assert log[2]["reason"] == "no_proof"
        assert log[2]["depth_exceeded"] is False

    def test_depth_exceeded_is_flagged(self):
        log = drive(
            {"op": "load", "program": "p :- p."},
            {"op": "query", "goal": "p", "depth": 5},
            {"op": "quit"},
        )
        assert log[2]["event"] == "failed" and log[2]["depth_exceeded"] is True

    def test_sessions_survive_multiple_queries(self):
        log = drive(
            {"op": "load", "program": "p. q."},
            {"op": "query", "goal": "p"},
            {"op": "query", "goal": "q"},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "tree", "result",
                               "tree", "result", "bye"]

    def test_pipelined_queries_never_hit_a_state_error(self):
        # A query sent right behind the previous result must not be rejected
        # just because the finished worker thread has not exited yet.
        frames = [{"op": "load", "program": "p."}]
        frames += [{"op": "query", "goal": "p"}] * 20
        frames.append({"op": "quit"})
        log = drive(*frames)
        assert events(log) == (["hello", "loaded"] + ["tree", "result"] * 20
                               + ["bye"])

    def test_pipelined_read_then_query(self):
        log = drive(
            {"op": "load", "program": "eq(Z, Z)."},
            {"op": "query", "goal": "forall X (exists Y (eq(X, Y)))"},
            {"op": "read_reply", "value": "1"},
            {"op": "query", "goal": "forall X (exists Y (eq(X, Y)))"},
            {"op": "read_reply", "value": "2"},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "tree", "read_request",
                               "result", "tree", "read_request", "result",
                               "bye"]
        results = [e for e in log if e["event"] == "result"]
        assert [r["witnesses"] for r in results] == [[["Y", "1"]], [["Y", "2"]]]

    def test_reloading_replaces_the_program(self):
        log = drive(
            {"op": "load", "program": "p."},
            {"op": "load", "program": "q."},
            {"op": "query", "goal": "q"},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "loaded", "tree", "result", "bye"]

    def test_abort_stops_a_pending_read(self):
        log = drive(
            {"op": "load", "program": CUBE},
            {"op": "query", "goal": CUBE_GOAL},
            {"op": "abort"},
            {"op": "quit"},
        )
        assert events(log) == ["hello", "loaded", "tree", "read_request",
                               "result", "bye"]
        assert log[4]["status"] == "aborted"

    def test_quit_during_a_read_aborts_cleanly(self):
        log = drive(
            {"op": "load", "program": CUBE},
            {"op": "query", "goal": CUBE_GOAL},
            {"op": "quit"},
        )
        assert events(log)[-2:] == ["result", "bye"]
        assert log[-2]["status"] == "aborted"

    def test_violations_report_their_node(self):
        log = drive(
            {"op": "load", "program": CUBE},
            {"op": "query", "goal": "exists Y (cube(f(2), Y))"},
            {"op": "quit"},
        )
        result = next(e for e in log if e["event"] == "result")
        assert result["status"] == "residual_violation"
        assert result["violation_node"] == 1


class TestProtocolErrors:
    def test_query_without_a_program(self):
        log = drive({"op": "query", "goal": "p"}, {"op": "quit"})
        assert log[1] == {"event": "error", "kind": "state",
                          "message": "no program loaded"}

    def test_read_reply_without_a_query(self):
        log = drive({"op": "read_reply", "value": "5"}, {"op": "quit"})
        assert log[1]["kind"] == "state"

    def test_abort_without_a_query(self):
        log = drive({"op": "abort"}, {"op": "quit"})
        assert log[1]["kind"] == "state"

    def test_bad_json_is_a_protocol_error(self):
        rfile = io.StringIO("this is not json\n" + json.dumps({"op": "quit"}) + "\n")
        wfile = io.StringIO()
        Session(rfile, wfile).run()
        log = [json.loads(line) for line in wfile.getvalue().splitlines()]
        assert log[1]["kind"] == "protocol"

    def test_unknown_ops_are_protocol_errors(self):
        log = drive({"op": "dance"}, {"op": "quit"})
        assert log[1]["kind"] == "protocol"
        assert "dance" in log[1]["message"]

    def test_bad_program_text_is_a_parse_error(self):
        log = drive({"op": "load", "program": "p(."}, {"op": "quit"})
        assert log[1]["kind"] == "parse"

    def test_bad_goal_text_is_a_parse_error(self):
        log = drive({"op": "load", "program": "p."},
                    {"op": "query", "goal": "p("}, {"op": "quit"})
        assert log[2]["kind"] == "parse"

    def test_unreadable_read_reply_keeps_the_read_pending(self):
        log = drive(
            {"op": "load", "program": CUBE},
            {"op": "query", "goal": CUBE_GOAL},
            {"op": "read_reply", "value": "(("},
            {"op": "read_reply", "value": "2"},
            {"op": "quit"},
        )
        errors = [e for e in log if e["event"] == "error"]
        assert len(errors) == 1 and errors[0]["kind"] == "parse"
        result = next(e for e in log if e["event"] == "result")
        assert result["witnesses"] == [["Y", "8"]]

    def test_bad_depth_is_a_protocol_error(self):
        log = drive({"op": "load", "program": "p."},
                    {"op": "query", "goal": "p", "depth": -1}, {"op": "quit"})
        assert log[2]["kind"] == "protocol"

    def test_eof_without_quit_is_tolerated(self):
        log = drive({"op": "load", "program": "p."})
        assert events(log) == ["hello", "loaded"]


class TestTcp:
    def test_round_trip_over_a_real_socket(self):
        started = threading.Event()
        holder = {}

        class Probe:
            pass

        def run_server():
            import fohh.service as svc

            with svc._Server(("127.0.0.1", 0), svc._Handler) as server:
                holder["port"] = server.server_address[1]
                started.set()
                server.handle_request()

        t = threading.Thread(target=run_server, daemon=True)
        t.start()
        assert started.wait(5)

        with socket.create_connection(("127.0.0.1", holder["port"]), timeout=5) as s:
            f = s.makefile("rw", encoding="utf-8")
            for frame in [
                {"op": "load", "program": "eq(Z, Z)."},
                {"op": "query", "goal": "forall X (exists Y (eq(X, Y)))"},
                {"op": "read_reply", "value": "42"},
                {"op": "quit"},
            ]:
                f.write(json.dumps(frame) + "\n")
            f.flush()
            log = [json.loads(line) for line in f]
        t.join(5)
        assert events(log) == ["hello", "loaded", "tree", "read_request",
                               "result", "bye"]
        assert log[4]["witnesses"] == [["Y", "42"]]
