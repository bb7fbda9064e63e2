// Thin typed client for /api/v1. Every non-2xx response carries
// {"errors": [{field, code, message}]}; those surface as ApiError so the
// form can map them onto fields. Network-level failures stay TypeError.

import { Defaults, FieldError, FlatParams, RunDescriptor, TabName } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, public errors: FieldError[]) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join('; ') || `HTTP ${status}`);
    this.name = 'ApiError';
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Api {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = '', fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let errors: FieldError[] = [];
      try {
        const body = await response.json();
        if (body && Array.isArray(body.errors)) errors = body.errors;
      } catch {
        // non-JSON error body; status alone will have to do
      }
      throw new ApiError(response.status, errors);
    }
    return response;
  }

  async defaults(): Promise<Defaults> {
    const response = await this.request('/api/v1/defaults');
    return response.json();
  }

  async uploadInput(kind: 'students' | 'curriculum', body: string): Promise<string> {
    const response = await this.request(`/api/v1/inputs/${kind}`, {
      method: 'POST',
      headers: { 'content-type': 'text/csv' },
      body,
    });
    const payload = await response.json();
    return payload.digest;
  }

  async submitRun(params: FlatParams, students: string, curriculum: string): Promise<string> {
    const response = await this.request('/api/v1/runs', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ params, students, curriculum }),
    });
    const payload = await response.json();
    return payload.run_id;
  }

  async runStatus(runId: string): Promise<RunDescriptor> {
    const response = await this.request(`/api/v1/runs/${runId}`);
    return response.json();
  }

  async dataset<T>(runId: string, name: TabName): Promise<T[]> {
    const response = await this.request(`/api/v1/runs/${runId}/datasets/${name}?format=json`);
    return response.json();
  }
}
