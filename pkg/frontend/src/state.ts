// Client-side session state. The server is authoritative: this store only
// caches what the service last said (no optimistic updates), and the table
// it holds always reflects the server's current head plus active filter.

import { ApplyResult, EffectMessage, TablePage, VersionNode, VizEntry } from "./types.js";

export interface NotebookEntry {
  command: string;
  version_id: number | null;
  error: string | null;
}

export interface UiSessionState {
  sessionId: string | null;
  versionId: number;
  table: TablePage | null;
  viz: VizEntry[];
  highlights: Record<string, Array<string | number>>; // view id -> highlighted marks
  tableFiltered: boolean;
  history: VersionNode[];
  notebook: NotebookEntry[];
  operators: string[];
  errorBanner: string | null;
}

export type EffectRouting = "table" | "chart" | "unknown";

export class SessionStore {
  private state: UiSessionState = {
    sessionId: null,
    versionId: 0,
    table: null,
    viz: [],
    highlights: {},
    tableFiltered: false,
    history: [],
    notebook: [],
    operators: [],
    errorBanner: null,
  };

  private listeners: Array<(state: UiSessionState) => void> = [];

  get current(): UiSessionState {
    return this.state;
  }

  subscribe(listener: (state: UiSessionState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(partial: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...partial };
    this.emit();
  }

  startSession(sessionId: string, versionId: number, table: TablePage): void {
    this.patch({
      sessionId,
      versionId,
      table,
      viz: [],
      highlights: {},
      tableFiltered: table.filtered,
      notebook: [],
      errorBanner: null,
    });
  }

  absorbApply(result: ApplyResult): void {
    const viz = [...this.state.viz];
    for (const entry of result.new_viz) {
      const existing = viz.findIndex((v) => v.view_id === entry.view_id);
      if (existing >= 0) viz[existing] = entry;
      else viz.push(entry);
    }
    this.patch({
      versionId: result.version_id,
      table: result.table,
      tableFiltered: result.table.filtered,
      viz,
      errorBanner: null,
    });
    for (const effect of result.effects) this.applyEffect(effect);
  }

  replaceViz(entries: VizEntry[]): void {
    this.patch({ viz: entries });
  }

  replaceTable(table: TablePage): void {
    this.patch({ table, tableFiltered: table.filtered });
  }

  replaceHistory(nodes: VersionNode[]): void {
    this.patch({ history: nodes });
  }

  replaceOperators(names: string[]): void {
    this.patch({ operators: names });
  }

  appendNotebook(entry: NotebookEntry): void {
    this.patch({ notebook: [...this.state.notebook, entry] });
  }

  setError(message: string | null): void {
    this.patch({ errorBanner: message });
  }

  /** Route one effect message to exactly one view. Unknown views are logged,
   *  never fatal. Returns where it landed so the caller can refetch a table
   *  page when a filter arrives over the event stream. */
  applyEffect(effect: EffectMessage): EffectRouting {
    if (effect.view === "table") {
      this.patch({ tableFiltered: effect.effect === "filter" });
      return "table";
    }
    const chart = this.state.viz.find((v) => v.view_id === effect.view);
    if (chart === undefined) {
      console.warn(`effect for unknown view ${effect.view}`, effect);
      return "unknown";
    }
    const highlights = { ...this.state.highlights };
    if (effect.effect === "reset") {
      delete highlights[effect.view];
    } else {
      highlights[effect.view] = effect.marks;
    }
    this.patch({ highlights });
    return "chart";
  }
}
