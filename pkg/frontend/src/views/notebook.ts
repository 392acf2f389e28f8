// Notebook View: a command line plus the scrollback of what ran, with the
// resulting version (or the error) beside each entry.

import { App } from "../app.js";
import { UiSessionState } from "../state.js";

export function renderNotebookView(root: HTMLElement, app: App, state: UiSessionState): void {
  let form = root.querySelector<HTMLFormElement>("form");
  if (form === null) {
    form = document.createElement("form");
    const input = document.createElement("input");
    input.type = "text";
    input.name = "command";
    input.placeholder = 'e.g. select v1 single where token == "comfy"';
    input.className = "command-input";
    const run = document.createElement("button");
    run.type = "submit";
    run.textContent = "run";
    form.append(input, run);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const command = input.value.trim();
      if (command.length > 0) {
        input.value = "";
        void app.submitCommand(command);
      }
    });
    root.appendChild(form);
  }

  let log = root.querySelector<HTMLElement>(".notebook-log");
  if (log === null) {
    log = document.createElement("ol");
    log.className = "notebook-log";
    root.appendChild(log);
  }
  log.replaceChildren();
  for (const entry of state.notebook) {
    const item = document.createElement("li");
    const code = document.createElement("code");
    code.textContent = entry.command;
    item.appendChild(code);
    const status = document.createElement("span");
    if (entry.error === null) {
      status.className = "ok";
      status.textContent = ` → v${entry.version_id}`;
    } else {
      status.className = "error";
      status.textContent = ` ✗ ${entry.error}`;
    }
    item.appendChild(status);
    log.appendChild(item);
  }
}
