// HTTP/WebSocket client. The transport is injectable so tests can replay
// recorded wire payloads without a network.

import {
  ApplyResult,
  EffectMessage,
  ErrorEnvelope,
  ServiceError,
  TablePage,
  VersionNode,
  VizEntry,
} from "./types.js";

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
}

export interface EventSocket {
  onMessage(handler: (message: EffectMessage) => void): void;
  close(): void;
}

export interface Transport {
  request(method: string, path: string, body?: unknown): Promise<HttpResponse>;
  openEvents(sessionId: string): EventSocket;
}

export function browserTransport(baseUrl: string): Transport {
  const http = baseUrl.replace(/\/$/, "");
  const ws = http.replace(/^http/, "ws");
  return {
    async request(method, path, body) {
      const response = await fetch(http + path, {
        method,
        headers: body === undefined ? {} : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      return { status: response.status, json: () => response.json() };
    },
    openEvents(sessionId) {
      const socket = new WebSocket(`${ws}/sessions/${sessionId}/events`);
      return {
        onMessage(handler) {
          socket.addEventListener("message", (event) => {
            handler(JSON.parse(String(event.data)) as EffectMessage);
          });
        },
        close: () => socket.close(),
      };
    },
  };
}

async function unwrap<T>(response: HttpResponse): Promise<T> {
  const payload = await response.json();
  if (response.status >= 400) {
    const envelope = payload as ErrorEnvelope;
    if (envelope && typeof envelope === "object" && envelope.error) {
      throw new ServiceError(envelope.error);
    }
    throw new Error(`request failed with status ${response.status}`);
  }
  return payload as T;
}

export class ServiceClient {
  constructor(private readonly transport: Transport) {}

  async createSession(options: {
    path?: string;
    text_columns?: string[];
    delimiter?: string;
  }): Promise<{ session_id: string; version_id: number; table: TablePage }> {
    return unwrap(await this.transport.request("POST", "/sessions", options));
  }

  async apply(
    sessionId: string,
    source: "json" | "command",
    payload: unknown,
  ): Promise<ApplyResult> {
    return unwrap(
      await this.transport.request("POST", `/sessions/${sessionId}/apply`, {
        source,
        payload,
      }),
    );
  }

  async table(sessionId: string, offset = 0, limit = 50): Promise<TablePage> {
    return unwrap(
      await this.transport.request(
        "GET",
        `/sessions/${sessionId}/table?offset=${offset}&limit=${limit}`,
      ),
    );
  }

  async viz(sessionId: string): Promise<VizEntry[]> {
    return unwrap(await this.transport.request("GET", `/sessions/${sessionId}/viz`));
  }

  async history(sessionId: string): Promise<{ nodes: VersionNode[] }> {
    return unwrap(await this.transport.request("GET", `/sessions/${sessionId}/history`));
  }

  async operators(sessionId: string): Promise<{ operators: string[] }> {
    return unwrap(await this.transport.request("GET", `/sessions/${sessionId}/operators`));
  }

  async checkout(sessionId: string, versionId: number): Promise<ApplyResult> {
    return unwrap(
      await this.transport.request("POST", `/sessions/${sessionId}/checkout`, {
        version_id: versionId,
      }),
    );
  }

  async clear(sessionId: string, view?: string): Promise<ApplyResult> {
    return unwrap(
      await this.transport.request(
        "POST",
        `/sessions/${sessionId}/clear`,
        view === undefined ? {} : { view },
      ),
    );
  }

  events(sessionId: string): EventSocket {
    return this.transport.openEvents(sessionId);
  }
}
