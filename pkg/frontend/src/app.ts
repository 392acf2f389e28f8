// Controller tying the service client to the state store: command
// submission from the Notebook View, mark clicks from charts, clear/undo/
// checkout, and the event stream. Components render from the store.

import { ServiceClient } from "./api.js";
import { SessionStore } from "./state.js";
import { EffectMessage, ServiceError, VizEntry } from "./types.js";

export class App {
  readonly store = new SessionStore();
  private events: { close(): void } | null = null;

  constructor(private readonly client: ServiceClient) {}

  get sessionId(): string {
    const id = this.store.current.sessionId;
    if (id === null) throw new Error("no session yet");
    return id;
  }

  async createSession(path: string, textColumns: string[]): Promise<void> {
    const created = await this.client.createSession({
      path,
      text_columns: textColumns,
    });
    this.store.startSession(created.session_id, created.version_id, created.table);
    await this.refreshHistory();
    await this.refreshOperators();
    this.subscribeEvents();
  }

  subscribeEvents(): void {
    this.events?.close();
    const socket = this.client.events(this.sessionId);
    socket.onMessage((message) => void this.onEvent(message));
    this.events = socket;
  }

  private async onEvent(message: EffectMessage): Promise<void> {
    const landed = this.store.applyEffect(message);
    if (landed === "table") {
      // a filter/reset arriving over the stream invalidates the cached page
      await this.refreshTable();
    }
  }

  /** Notebook View: run one command, record it in the history. */
  async submitCommand(command: string): Promise<void> {
    try {
      const result = await this.client.apply(this.sessionId, "command", command);
      this.store.absorbApply(result);
      this.store.appendNotebook({ command, version_id: result.version_id, error: null });
      await this.refreshHistory();
      if (command.trim().startsWith("synthesize")) await this.refreshOperators();
      if (command.trim() === "undo" || command.trim().startsWith("checkout")) {
        await this.refreshViz();
      }
    } catch (error) {
      const message = describeError(error);
      this.store.appendNotebook({ command, version_id: null, error: message });
      this.store.setError(message);
    }
  }

  /** Visualization View: a click on a mark becomes a single-point selection. */
  async onMarkClick(viewId: string, markKey: string | number): Promise<void> {
    const chart = this.store.current.viz.find((v) => v.view_id === viewId);
    if (chart === undefined || chart.spec.source_binding === null) {
      console.warn(`mark click on view without a binding: ${viewId}`);
      return;
    }
    const field = chart.spec.source_binding.key_field;
    const literal =
      typeof markKey === "number" ? String(markKey) : `"${String(markKey).replace(/"/g, '\\"')}"`;
    await this.submitCommand(`select ${viewId} single where ${field} == ${literal}`);
  }

  /** Table/clear button: drop the active selection everywhere. */
  async clearSelection(view?: string): Promise<void> {
    try {
      const result = await this.client.clear(this.sessionId, view);
      this.store.absorbApply(result);
    } catch (error) {
      this.store.setError(describeError(error));
    }
  }

  async checkout(versionId: number): Promise<void> {
    try {
      const result = await this.client.checkout(this.sessionId, versionId);
      this.store.absorbApply(result);
      await this.refreshViz();
      await this.refreshHistory();
    } catch (error) {
      this.store.setError(describeError(error));
    }
  }

  async loadTablePage(offset: number, limit: number): Promise<void> {
    this.store.replaceTable(await this.client.table(this.sessionId, offset, limit));
  }

  async refreshTable(): Promise<void> {
    const page = this.store.current.table;
    await this.loadTablePage(page?.offset ?? 0, page?.limit ?? 50);
  }

  async refreshViz(): Promise<void> {
    const entries: VizEntry[] = await this.client.viz(this.sessionId);
    this.store.replaceViz(entries);
  }

  async refreshHistory(): Promise<void> {
    const history = await this.client.history(this.sessionId);
    this.store.replaceHistory(history.nodes);
  }

  async refreshOperators(): Promise<void> {
    const listing = await this.client.operators(this.sessionId);
    this.store.replaceOperators(listing.operators);
  }

  dispose(): void {
    this.events?.close();
    this.events = null;
  }
}

export function describeError(error: unknown): string {
  if (error instanceof ServiceError) {
    const at = error.envelope.position !== undefined ? ` at offset ${error.envelope.position}` : "";
    return `${error.envelope.type}${at}: ${error.envelope.message}`;
  }
  return error instanceof Error ? error.message : String(error);
}
