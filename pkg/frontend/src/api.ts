/** Thin JSON client for the screening service. */

import type { FeaturesPayload, ScreeningReport, SessionBody, TasksPayload } from "./schema.js";

export class ApiError extends Error {
  status: number;
  detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ApiError(resp.status, (body as { error?: string }).error ?? resp.statusText);
  }
  return body as T;
}

export async function getTasks(base: string): Promise<TasksPayload> {
  return request<TasksPayload>(`${base}/api/v1/tasks`);
}

export async function postSession(base: string, body: SessionBody): Promise<string> {
  const payload = await request<{ id: string }>(`${base}/api/v1/sessions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  return payload.id;
}

export async function getFeatures(base: string, id: string): Promise<FeaturesPayload> {
  return request<FeaturesPayload>(`${base}/api/v1/sessions/${id}/features`);
}

export async function getScreening(base: string, id: string): Promise<ScreeningReport> {
  return request<ScreeningReport>(`${base}/api/v1/sessions/${id}/screening`);
}
