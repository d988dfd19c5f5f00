/** Typed client for the enumeration service; the UI's only server access. */

import type {
  ModelDiagnostic,
  ModelSummary,
  NextReply,
  SessionResource,
} from './types.js';

export class ModelErrors extends Error {
  constructor(public diagnostics: ModelDiagnostic[]) {
    super(diagnostics.map((d) => `${d.line}:${d.col}: ${d.message}`).join('\n'));
  }
}

export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (resp.status === 422) {
      const payload = await resp.json();
      throw new ModelErrors(payload.detail as ModelDiagnostic[]);
    }
    if (resp.status === 409) {
      // exhausted sessions still answer with a status body
      return (await resp.json()) as T;
    }
    if (!resp.ok) {
      const text = await resp.text();
      throw new Error(`${method} ${path} failed (${resp.status}): ${text}`);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }

  loadModel(text: string): Promise<ModelSummary> {
    return this.request('POST', '/models', { text });
  }

  getModel(modelId: string): Promise<ModelSummary> {
    return this.request('GET', `/models/${modelId}`);
  }

  openSession(
    modelId: string,
    command: string,
    size: number,
    mode = 'reach',
  ): Promise<SessionResource> {
    return this.request('POST', '/sessions', { modelId, command, size, mode });
  }

  listSessions(): Promise<SessionResource[]> {
    return this.request('GET', '/sessions');
  }

  next(sessionId: string): Promise<NextReply> {
    return this.request('POST', `/sessions/${sessionId}/next`);
  }

  deepen(modelId: string, command: string, newScope: number): Promise<SessionResource[]> {
    return this.request('POST', `/models/${modelId}/deepen`, { command, newScope });
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request('DELETE', `/sessions/${sessionId}`);
  }
}
