/** Browser entry: wires the static form to a session over WebSocket, and
 * offers an offline replay of a recorded session for a quick look around. */

import fixture from "../fixtures/cube-session.json";
import { SessionController } from "./controller";
import type { ServiceEvent } from "./protocol";
import { renderApp } from "./render";
import { replay, type SessionState } from "./state";
import { connectWebSocket } from "./transport";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

const output = element<HTMLElement>("output");
let controller: SessionController | null = null;

function show(state: SessionState): void {
  output.innerHTML = renderApp(state);
  const input = output.querySelector<HTMLInputElement>(".read-prompt input");
  input?.focus();
}

function notice(text: string): void {
  output.innerHTML = `<p class="status">${text}</p>`;
}

element<HTMLButtonElement>("connect").addEventListener("click", async () => {
  const url = element<HTMLInputElement>("url").value.trim();
  notice(`connecting to ${url} …`);
  try {
    const transport = await connectWebSocket(url);
    controller = new SessionController(transport);
    controller.subscribe(show);
  } catch (error) {
    notice(error instanceof Error ? error.message : String(error));
  }
});

element<HTMLButtonElement>("replay").addEventListener("click", () => {
  controller = null;
  show(replay(fixture.events as ServiceEvent[]));
});

element<HTMLButtonElement>("run").addEventListener("click", () => {
  if (!controller) {
    notice("connect (or replay the recorded session) first");
    return;
  }
  controller.load(element<HTMLTextAreaElement>("program").value);
  controller.query(element<HTMLInputElement>("goal").value);
});

element<HTMLButtonElement>("quit").addEventListener("click", () => {
  controller?.quit();
});

output.addEventListener("submit", (submit) => {
  const form = submit.target as HTMLElement;
  if (form.matches("form[data-action='read']")) {
    submit.preventDefault();
    const input = form.querySelector<HTMLInputElement>("input[name='value']");
    if (input && input.value.trim() && controller) {
      controller.answerRead(input.value.trim());
    }
  }
});

output.addEventListener("click", (click) => {
  const target = click.target as HTMLElement;
  if (target.matches("button[data-action='abort']")) {
    controller?.abort();
  }
});

notice("connect to a gateway, or replay the recorded cube session");
