// Operator View: the registry's operators with parameter forms. Submitting
// builds the equivalent command and runs it through the same apply path the
// notebook uses.

import { App } from "../app.js";
import { UiSessionState } from "../state.js";

interface ParamField {
  name: string;
  placeholder: string;
}

// Parameter defaults mirror the engine registry (documented in the README).
const FORM_DEFS: Record<string, { hint: string; params: ParamField[] }> = {
  lowercase: { hint: "project · update", params: [] },
  remove_stopwords: { hint: "project · update", params: [] },
  strip_punct: { hint: "project · update", params: [] },
  tokenize: { hint: "mutate · create", params: [{ name: "out", placeholder: "output column" }] },
  tfidf: {
    hint: "mutate · create",
    params: [
      { name: "out", placeholder: "output column" },
      { name: "min_df", placeholder: "1" },
      { name: "norm", placeholder: "l2" },
    ],
  },
  lda: {
    hint: "mutate · create",
    params: [
      { name: "out", placeholder: "output column" },
      { name: "k", placeholder: "3" },
      { name: "iterations", placeholder: "200" },
      { name: "seed", placeholder: "0" },
    ],
  },
  cluster_assign: { hint: "mutate · create", params: [{ name: "out", placeholder: "output column" }] },
  pca2: { hint: "project · create", params: [{ name: "out", placeholder: "output column" }] },
  unique_tokens: { hint: "set · add", params: [{ name: "key", placeholder: "metadata key" }] },
  mean: { hint: "aggregate · add", params: [{ name: "key", placeholder: "metadata key" }] },
  sum: { hint: "aggregate · add", params: [{ name: "key", placeholder: "metadata key" }] },
  count: { hint: "aggregate · add", params: [{ name: "key", placeholder: "metadata key" }] },
  mean_score_per_token: { hint: "aggregate · add", params: [] },
  bar: { hint: "visualize · create", params: [{ name: "top_k", placeholder: "15" }] },
  scatter: { hint: "visualize · create", params: [{ name: "color", placeholder: "cluster column" }] },
};

export function renderOperatorView(root: HTMLElement, app: App, state: UiSessionState): void {
  root.replaceChildren();
  const columns = state.table?.columns.map((c) => c.name) ?? [];
  for (const name of state.operators) {
    const def = FORM_DEFS[name] ?? { hint: "synthesized pipeline", params: [] };
    const form = document.createElement("form");
    form.className = "operator-form";
    form.dataset.operator = name;

    const header = document.createElement("strong");
    header.textContent = name;
    const hint = document.createElement("small");
    hint.textContent = ` ${def.hint}`;
    form.append(header, hint, document.createElement("br"));

    const columnSelect = document.createElement("select");
    columnSelect.name = "column";
    const auto = document.createElement("option");
    auto.value = "";
    auto.textContent = "(column: auto)";
    columnSelect.appendChild(auto);
    for (const column of columns) {
      const option = document.createElement("option");
      option.value = column;
      option.textContent = column;
      columnSelect.appendChild(option);
    }
    form.appendChild(columnSelect);

    const actionSelect = document.createElement("select");
    actionSelect.name = "action";
    for (const action of ["", "update", "create", "add"]) {
      const option = document.createElement("option");
      option.value = action;
      option.textContent = action === "" ? "(action: default)" : action;
      actionSelect.appendChild(option);
    }
    form.appendChild(actionSelect);

    for (const param of def.params) {
      const input = document.createElement("input");
      input.name = `param:${param.name}`;
      input.placeholder = `${param.name} (${param.placeholder})`;
      input.size = 12;
      form.appendChild(input);
    }

    const run = document.createElement("button");
    run.type = "submit";
    run.textContent = "apply";
    form.appendChild(run);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void app.submitCommand(commandFromForm(name, form));
    });
    root.appendChild(form);
  }
}

export function commandFromForm(operator: string, form: HTMLFormElement): string {
  const data = new FormData(form);
  const column = String(data.get("column") ?? "");
  const action = String(data.get("action") ?? "");
  const parts = [operator];
  if (column) parts.push(column);
  if (action) parts.push(action);
  const params: string[] = [];
  for (const [key, raw] of data.entries()) {
    if (!key.startsWith("param:")) continue;
    const value = String(raw).trim();
    if (value === "") continue;
    const name = key.slice("param:".length);
    params.push(/^-?\d+(\.\d+)?$/.test(value) ? `${name}=${value}` : `${name}="${value}"`);
  }
  if (params.length > 0) parts.push(`with ${params.join(", ")}`);
  return parts.join(" ");
}
