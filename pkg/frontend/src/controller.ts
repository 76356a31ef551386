/** Session controller: one transport, one evolving state, typed operations.
 *
 * Both the browser app and the tests drive the service through this class,
 * so a test run exercises exactly the code path the UI uses.
 */

import { encodeRequest, parseEvent, type Request } from "./protocol";
import {
  applyEvent,
  initialState,
  isRunning,
  noteAnswer,
  type SessionState,
} from "./state";
import type { LineTransport } from "./transport";

export class SessionController {
  private current = initialState();
  private readonly listeners = new Set<(state: SessionState) => void>();

  constructor(
    private readonly transport: LineTransport,
    private readonly onBadFrame: (reason: string) => void = (reason) =>
      console.error(reason),
  ) {
    transport.onLine((line) => this.receive(line));
    transport.onClose(() => {
      if (!this.current.closed) {
        this.update({ ...this.current, connected: false, closed: true });
      }
    });
  }

  get state(): SessionState {
    return this.current;
  }

  subscribe(listener: (state: SessionState) => void): () => void {
    this.listeners.add(listener);
    listener(this.current);
    return () => this.listeners.delete(listener);
  }

  load(program: string): void {
    this.send({ op: "load", program });
  }

  query(goal: string, options: { depth?: number; trace?: boolean } = {}): void {
    this.send({ op: "query", goal, ...options });
  }

  answerRead(value: string): void {
    this.send({ op: "read_reply", value });
    this.update(noteAnswer(this.current, value));
  }

  abort(): void {
    this.send({ op: "abort" });
  }

  quit(): void {
    this.send({ op: "quit" });
  }

  get running(): boolean {
    return isRunning(this.current);
  }

  private send(request: Request): void {
    this.transport.sendLine(encodeRequest(request));
  }

  private receive(line: string): void {
    try {
      this.update(applyEvent(this.current, parseEvent(line)));
    } catch (error) {
      this.onBadFrame(error instanceof Error ? error.message : String(error));
    }
  }

  private update(state: SessionState): void {
    this.current = state;
    for (const listener of this.listeners) listener(state);
  }
}
