/**
 * Thin fetch client for the /v1 annotation service.
 */

import type {
  LabelResponse,
  MetricsResponse,
  NextResponse,
  RoundResponse,
  SessionOptions,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

async function request<T>(
  baseUrl: string,
  method: string,
  path: string,
  body?: unknown,
): Promise<T> {
  const response = await fetch(baseUrl + path, {
    method,
    headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  let payload: unknown = null;
  try {
    payload = await response.json();
  } catch {
    // non-JSON error body; fall through with the status alone
  }
  if (!response.ok) {
    const detail =
      payload && typeof payload === 'object' && 'detail' in payload
        ? String((payload as { detail: unknown }).detail)
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, detail);
  }
  return payload as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  async createSession(options: SessionOptions): Promise<string> {
    const payload = await request<{ session_id: string }>(
      this.baseUrl,
      'POST',
      '/v1/sessions',
      options,
    );
    return payload.session_id;
  }

  next(sessionId: string): Promise<NextResponse> {
    return request(this.baseUrl, 'GET', `/v1/sessions/${sessionId}/next`);
  }

  label(
    sessionId: string,
    recordId: number,
    label: number,
  ): Promise<LabelResponse> {
    return request(this.baseUrl, 'POST', `/v1/sessions/${sessionId}/label`, {
      record_id: recordId,
      label,
    });
  }

  round(sessionId: string): Promise<RoundResponse> {
    return request(this.baseUrl, 'POST', `/v1/sessions/${sessionId}/round`);
  }

  metrics(sessionId: string): Promise<MetricsResponse> {
    return request(this.baseUrl, 'GET', `/v1/sessions/${sessionId}/metrics`);
  }
}
