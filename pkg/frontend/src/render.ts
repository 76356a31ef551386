/** Pure rendering: session state to an HTML string for the output panel. */

import type { SessionState } from "./state";
import { nodeDepths, RULE_LABELS } from "./tree";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderStatus(state: SessionState): string {
  if (state.closed) return `<p class="status">session closed</p>`;
  if (!state.connected) return `<p class="status">not connected</p>`;
  const service = state.service
    ? `${escapeHtml(state.service.name)} ${escapeHtml(state.service.version)}`
    : "service";
  const loaded =
    state.loadedClauses === null
      ? "no program loaded"
      : `${state.loadedClauses} clause${state.loadedClauses === 1 ? "" : "s"} loaded`;
  return `<p class="status">connected to ${service} — ${loaded}</p>`;
}

function renderTree(state: SessionState): string {
  if (!state.tree) return "";
  const depths = nodeDepths(state.tree);
  const visited = new Set(state.visits);
  const rows = state.tree
    .map((node) => {
      const depth = depths[node.index - 1] ?? 0;
      const label = RULE_LABELS[node.rule] ?? node.rule;
      const classes = ["tree-node", visited.has(node.index) ? "visited" : ""]
        .filter(Boolean)
        .join(" ");
      return (
        `<li class="${classes}" data-node="${node.index}" ` +
        `style="--depth:${depth}">` +
        `<span class="node-index">${node.index}</span>` +
        `<span class="node-rule rule-${escapeHtml(node.rule)}">${label}</span>` +
        `<span class="node-sequent">${escapeHtml(node.sequent)}</span></li>`
      );
    })
    .reverse(); // root first reads top-down like the replay
  return `<section class="tree"><h2>proof tree (${state.tree.length} nodes)</h2><ul>${rows.join("")}</ul></section>`;
}

function renderRead(state: SessionState): string {
  if (!state.pendingRead) return "";
  const { param, prompt, node } = state.pendingRead;
  return (
    `<form class="read-prompt" data-action="read">` +
    `<p class="read-sequent">paused at node ${node}: <code>${escapeHtml(prompt)}</code></p>` +
    `<label>${escapeHtml(param)} ? ` +
    `<input name="value" autocomplete="off" autofocus /></label>` +
    `<button type="submit">answer</button>` +
    `<button type="button" data-action="abort">abort</button></form>`
  );
}

function renderAnswered(state: SessionState): string {
  if (state.answered.length === 0) return "";
  const rows = state.answered
    .map(
      ([param, value, node]) =>
        `<li class="read-row">${escapeHtml(param)} ? ${escapeHtml(value)} ` +
        `<span class="read-node">(node ${node})</span></li>`,
    )
    .join("");
  return `<ul class="reads">${rows}</ul>`;
}

function renderResult(state: SessionState): string {
  if (state.failed) {
    const note = state.failed.depth_exceeded ? " (depth limit reached)" : "";
    return `<p class="result-status failed">no proof${note}</p>`;
  }
  if (!state.result) return "";
  const { status, witnesses, violation_node } = state.result;
  if (status === "completed") {
    const rows = witnesses
      .map(
        ([name, value]) =>
          `<li class="witness-row">${escapeHtml(name)} = ${escapeHtml(value)}</li>`,
      )
      .join("");
    return (
      `<section class="result">` +
      (rows ? `<ul class="witnesses">${rows}</ul>` : "") +
      `<p class="result-status completed">yes.</p></section>`
    );
  }
  if (status === "residual_violation") {
    return `<p class="result-status violation">violation at node ${violation_node}.</p>`;
  }
  return `<p class="result-status aborted">aborted.</p>`;
}

function renderErrors(state: SessionState): string {
  if (state.errors.length === 0) return "";
  const rows = state.errors
    .map(
      (e) =>
        `<li class="error-row">${escapeHtml(e.kind)}: ${escapeHtml(e.message)}</li>`,
    )
    .join("");
  return `<ul class="errors">${rows}</ul>`;
}

function renderEventLog(state: SessionState): string {
  if (state.eventLog.length === 0) return "";
  const rows = state.eventLog
    .map((e) => `<li class="event-row">${escapeHtml(JSON.stringify(e))}</li>`)
    .join("");
  return (
    `<details class="event-log"><summary>event log (${state.eventLog.length})</summary>` +
    `<ul>${rows}</ul></details>`
  );
}

export function renderApp(state: SessionState): string {
  return [
    renderStatus(state),
    renderTree(state),
    renderAnswered(state),
    renderRead(state),
    renderResult(state),
    renderErrors(state),
    renderEventLog(state),
  ].join("");
}
