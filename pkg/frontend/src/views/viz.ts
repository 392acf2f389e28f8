// Visualization View: a carousel of charts rendered from the emitted
// Vega-Lite documents. Mark clicks go back to the server as selections;
// the overlay list of marks doubles as the click surface (vega's own click
// signals stay local, the server remains the source of coordination truth).

import { App } from "../app.js";
import { embedChart, EmbeddedChart } from "../embed.js";
import { UiSessionState } from "../state.js";
import { VizEntry } from "../types.js";

const embedded = new Map<string, { entry: VizEntry; chart: EmbeddedChart | null }>();

export function renderVizView(root: HTMLElement, app: App, state: UiSessionState): void {
  const seen = new Set<string>();
  for (const entry of state.viz) {
    seen.add(entry.view_id);
    let panel = root.querySelector<HTMLElement>(`[data-view-id="${entry.view_id}"]`);
    if (panel === null) {
      panel = document.createElement("section");
      panel.dataset.viewId = entry.view_id;
      panel.className = "chart-panel";
      root.appendChild(panel);
    }
    renderPanel(panel, app, entry, state);
  }
  for (const panel of Array.from(root.querySelectorAll<HTMLElement>("[data-view-id]"))) {
    const id = panel.dataset.viewId ?? "";
    if (!seen.has(id)) {
      embedded.get(id)?.chart?.finalize();
      embedded.delete(id);
      panel.remove();
    }
  }
}

function renderPanel(panel: HTMLElement, app: App, entry: VizEntry, state: UiSessionState): void {
  let title = panel.querySelector<HTMLElement>("h3");
  if (title === null) {
    title = document.createElement("h3");
    panel.appendChild(title);
  }
  title.textContent = `${entry.view_id} · ${entry.spec.mark}`;

  let chartHost = panel.querySelector<HTMLElement>(".chart-host");
  if (chartHost === null) {
    chartHost = document.createElement("div");
    chartHost.className = "chart-host";
    panel.appendChild(chartHost);
  }
  const cached = embedded.get(entry.view_id);
  if (cached === undefined || cached.entry !== entry) {
    cached?.chart?.finalize();
    embedded.set(entry.view_id, { entry, chart: null });
    void embedChart(chartHost, entry.vegalite).then((chart) => {
      const current = embedded.get(entry.view_id);
      if (current && current.entry === entry) current.chart = chart;
      else chart.finalize();
    });
  }

  let markList = panel.querySelector<HTMLElement>(".marks");
  if (markList === null) {
    markList = document.createElement("div");
    markList.className = "marks";
    panel.appendChild(markList);
  }
  markList.replaceChildren();
  const highlighted = new Set((state.highlights[entry.view_id] ?? []).map(String));
  const binding = entry.spec.source_binding;
  if (binding === null) return;
  for (const record of entry.spec.data) {
    const key = record[binding.key_field];
    const button = document.createElement("button");
    button.className = "mark";
    button.dataset.markKey = String(key);
    button.textContent = binding.key_field === "token" ? String(key) : `#${String(key)}`;
    if (highlighted.has(String(key))) button.classList.add("highlighted");
    button.addEventListener("click", () =>
      void app.onMarkClick(entry.view_id, binding.key_field === "row_id" ? Number(key) : String(key)),
    );
    markList.appendChild(button);
  }
}
