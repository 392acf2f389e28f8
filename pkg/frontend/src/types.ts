// Wire types mirroring the service's JSON responses.

export interface ColumnInfo {
  name: string;
  dtype: string;
}

export interface TableRow {
  row_id: number;
  [column: string]: unknown;
}

export interface TablePage {
  columns: ColumnInfo[];
  rows: TableRow[];
  total: number;
  offset: number;
  limit: number;
  version_id: number;
  filtered: boolean;
}

export interface EffectMessage {
  view: string;
  effect: "filter" | "highlight" | "reset";
  row_ids: number[];
  marks: Array<string | number>;
}

export interface SourceBinding {
  column: string;
  metadata_key: string | null;
  key_field: "token" | "row_id";
  mark_to_rows: Record<string, number[]>;
}

export interface VizSpecDict {
  view_id: string;
  mark: "bar" | "point";
  data: Array<Record<string, unknown>>;
  encodings: Record<string, unknown>;
  transforms: Record<string, unknown>;
  signals: Array<[string, string]>;
  source_binding: SourceBinding | null;
}

export interface VizEntry {
  view_id: string;
  spec: VizSpecDict;
  vegalite: Record<string, unknown>;
}

export interface ApplyResult {
  version_id: number;
  effects: EffectMessage[];
  new_viz: VizEntry[];
  table: TablePage;
}

export interface VersionNode {
  version_id: number;
  parent_id: number | null;
  operator_record: string;
  snapshot: Record<string, string>;
  created_at: string;
}

export interface ErrorEnvelope {
  error: {
    type: string;
    message: string;
    position?: number;
    path?: string;
    line?: number;
    expected?: string[];
  };
}

export class ServiceError extends Error {
  readonly envelope: ErrorEnvelope["error"];

  constructor(envelope: ErrorEnvelope["error"]) {
    super(`${envelope.type}: ${envelope.message}`);
    this.envelope = envelope;
  }
}
