/** Wire protocol of the fohh session service: line-delimited JSON frames. */

export type Request =
  | { op: "load"; program: string }
  | { op: "query"; goal: string; depth?: number; trace?: boolean }
  | { op: "read_reply"; value: string }
  | { op: "abort" }
  | { op: "quit" };

export type ResultStatus = "completed" | "residual_violation" | "aborted";
export type ErrorKind = "parse" | "protocol" | "state" | "internal";

export interface HelloEvent {
  event: "hello";
  service: string;
  version: string;
}

export interface LoadedEvent {
  event: "loaded";
  clauses: number;
}

export interface TreeEvent {
  event: "tree";
  n: number;
  /** One node per line: `index TAB rule TAB offsets TAB sequent`. */
  lines: string[];
}

export interface VisitEvent {
  event: "visit";
  node: number;
}

export interface ReadRequestEvent {
  event: "read_request";
  param: string;
  prompt: string;
  node: number;
}

export interface ResultEvent {
  event: "result";
  status: ResultStatus;
  witnesses: [name: string, value: string][];
  reads: [param: string, value: string, node: number][];
  violation_node: number | null;
}

export interface FailedEvent {
  event: "failed";
  reason: string;
  depth_exceeded: boolean;
}

export interface ErrorEvent {
  event: "error";
  kind: ErrorKind;
  message: string;
}

export interface ByeEvent {
  event: "bye";
}

export type ServiceEvent =
  | HelloEvent
  | LoadedEvent
  | TreeEvent
  | VisitEvent
  | ReadRequestEvent
  | ResultEvent
  | FailedEvent
  | ErrorEvent
  | ByeEvent;

const EVENT_NAMES = new Set([
  "hello",
  "loaded",
  "tree",
  "visit",
  "read_request",
  "result",
  "failed",
  "error",
  "bye",
]);

/** Parse one frame line; throws on anything that is not a known event. */
export function parseEvent(line: string): ServiceEvent {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch {
    throw new Error(`not a JSON frame: ${line}`);
  }
  if (
    typeof value !== "object" ||
    value === null ||
    typeof (value as { event?: unknown }).event !== "string" ||
    !EVENT_NAMES.has((value as { event: string }).event)
  ) {
    throw new Error(`not a service event: ${line}`);
  }
  return value as ServiceEvent;
}

export function encodeRequest(request: Request): string {
  return JSON.stringify(request);
}
