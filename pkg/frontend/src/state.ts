/** Pure session state: a left fold over the service's event stream. */

import type {
  ErrorEvent,
  FailedEvent,
  ReadRequestEvent,
  ResultEvent,
  ServiceEvent,
} from "./protocol";
import { parseTree, type TreeNode } from "./tree";

export interface SessionState {
  connected: boolean;
  closed: boolean;
  service: { name: string; version: string } | null;
  loadedClauses: number | null;
  tree: TreeNode[] | null;
  visits: number[];
  pendingRead: ReadRequestEvent | null;
  /** Reads answered so far in the running replay (param, value, node). */
  answered: [string, string, number][];
  result: ResultEvent | null;
  failed: FailedEvent | null;
  errors: ErrorEvent[];
  eventLog: ServiceEvent[];
}

export function initialState(): SessionState {
  return {
    connected: false,
    closed: false,
    service: null,
    loadedClauses: null,
    tree: null,
    visits: [],
    pendingRead: null,
    answered: [],
    result: null,
    failed: null,
    errors: [],
    eventLog: [],
  };
}

/** A query is in flight: a tree arrived and no outcome has yet. */
export function isRunning(state: SessionState): boolean {
  return state.tree !== null && state.result === null && state.failed === null;
}

function clearRun(state: SessionState): SessionState {
  return {
    ...state,
    tree: null,
    visits: [],
    pendingRead: null,
    answered: [],
    result: null,
    failed: null,
  };
}

export function applyEvent(state: SessionState, event: ServiceEvent): SessionState {
  const logged = { ...state, eventLog: [...state.eventLog, event] };
  switch (event.event) {
    case "hello":
      return {
        ...logged,
        connected: true,
        service: { name: event.service, version: event.version },
      };
    case "loaded":
      return { ...clearRun(logged), loadedClauses: event.clauses };
    case "tree":
      return { ...clearRun(logged), tree: parseTree(event.lines) };
    case "visit":
      return { ...logged, visits: [...state.visits, event.node] };
    case "read_request":
      return { ...logged, pendingRead: event };
    case "result":
      return {
        ...logged,
        pendingRead: null,
        answered: event.reads,
        result: event,
      };
    case "failed":
      return { ...clearRun(logged), failed: event };
    case "error":
      return { ...logged, errors: [...state.errors, event] };
    case "bye":
      return { ...logged, connected: false, closed: true, pendingRead: null };
  }
}

/** Record a locally submitted read answer before the service confirms it. */
export function noteAnswer(state: SessionState, value: string): SessionState {
  if (!state.pendingRead) return state;
  const { param, node } = state.pendingRead;
  return {
    ...state,
    pendingRead: null,
    answered: [...state.answered, [param, value, node]],
  };
}

export function replay(events: ServiceEvent[]): SessionState {
  return events.reduce(applyEvent, initialState());
}
