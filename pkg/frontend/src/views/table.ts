// Table View: paged data grid with a filter banner and clear control.

import { App } from "../app.js";
import { UiSessionState } from "../state.js";

export function renderTableView(root: HTMLElement, app: App, state: UiSessionState): void {
  root.replaceChildren();
  const page = state.table;
  if (page === null) {
    root.textContent = "no data loaded";
    return;
  }

  const banner = document.createElement("div");
  banner.className = "table-banner";
  banner.textContent = page.filtered
    ? `filtered: ${page.total} row${page.total === 1 ? "" : "s"} match`
    : `${page.total} rows`;
  if (page.filtered) {
    const clear = document.createElement("button");
    clear.textContent = "clear filter";
    clear.className = "clear-filter";
    clear.addEventListener("click", () => void app.clearSelection());
    banner.appendChild(clear);
  }
  root.appendChild(banner);

  const table = document.createElement("table");
  const head = table.createTHead().insertRow();
  head.insertCell().textContent = "#";
  for (const column of page.columns) {
    const cell = head.insertCell();
    cell.textContent = `${column.name} (${column.dtype})`;
  }
  const body = table.createTBody();
  for (const row of page.rows) {
    const tr = body.insertRow();
    tr.dataset.rowId = String(row.row_id);
    tr.insertCell().textContent = String(row.row_id);
    for (const column of page.columns) {
      const value = row[column.name];
      tr.insertCell().textContent = value === null ? "" : formatCell(value);
    }
  }
  root.appendChild(table);

  const pager = document.createElement("div");
  pager.className = "pager";
  const prev = document.createElement("button");
  prev.textContent = "prev";
  prev.disabled = page.offset === 0;
  prev.addEventListener("click", () =>
    void app.loadTablePage(Math.max(0, page.offset - page.limit), page.limit),
  );
  const next = document.createElement("button");
  next.textContent = "next";
  next.disabled = page.offset + page.limit >= page.total;
  next.addEventListener("click", () => void app.loadTablePage(page.offset + page.limit, page.limit));
  pager.append(prev, ` ${page.offset}–${Math.min(page.offset + page.limit, page.total)} `, next);
  root.appendChild(pager);
}

function formatCell(value: unknown): string {
  if (Array.isArray(value)) {
    const shown = value.slice(0, 6).map(shortNumber).join(", ");
    return value.length > 6 ? `[${shown}, …]` : `[${shown}]`;
  }
  return shortNumber(value);
}

function shortNumber(value: unknown): string {
  if (typeof value === "number" && !Number.isInteger(value)) return value.toFixed(4);
  return String(value);
}
