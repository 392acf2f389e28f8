// Bootstrap: four coordinated views over one session, re-rendered from the
// store on every state change.

import { browserTransport, ServiceClient } from "./api.js";
import { App } from "./app.js";
import { renderNotebookView } from "./views/notebook.js";
import { renderOperatorView } from "./views/operator.js";
import { renderTableView } from "./views/table.js";
import { renderVizView } from "./views/viz.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ?? "http://127.0.0.1:8878";
const CORPUS_PATH =
  new URLSearchParams(window.location.search).get("corpus") ?? "src/vita/data/reviews.csv";
const TEXT_COLUMNS = (
  new URLSearchParams(window.location.search).get("text") ?? "Review"
).split(",");

function mount(): void {
  const app = new App(new ServiceClient(browserTransport(SERVICE_URL)));
  const roots = {
    operator: document.getElementById("operator-view")!,
    viz: document.getElementById("viz-view")!,
    table: document.getElementById("table-view")!,
    notebook: document.getElementById("notebook-view")!,
    banner: document.getElementById("error-banner")!,
  };

  app.store.subscribe((state) => {
    renderOperatorView(roots.operator, app, state);
    renderVizView(roots.viz, app, state);
    renderTableView(roots.table, app, state);
    renderNotebookView(roots.notebook, app, state);
    roots.banner.textContent = state.errorBanner ?? "";
    roots.banner.style.display = state.errorBanner === null ? "none" : "block";
  });

  void app
    .createSession(CORPUS_PATH, TEXT_COLUMNS)
    .catch((error) => {
      roots.banner.textContent = `cannot start session: ${String(error)}`;
      roots.banner.style.display = "block";
    });
}

mount();
