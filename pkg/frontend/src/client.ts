/** Typed fetch client for the /v1 scheme-plan API.  The editor computes no
 * verdicts of its own: everything beyond drawing goes through here. */

import type { EventDoc, PlanDoc, RegionCatalogDoc, SessionDoc, VerifyResults, ViolationDoc } from './wire.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: { error?: string; violations?: ViolationDoc[]; [key: string]: unknown },
  ) {
    super(`${status}: ${body.error ?? 'request failed'}`);
  }
}

export interface SavedPlan {
  id: string;
  version: number;
  violations: ViolationDoc[];
}

export interface StoredPlan {
  id: string;
  version: number;
  plan: PlanDoc;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 204) return undefined as T;
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : {};
    if (!response.ok) throw new ApiError(response.status, parsed);
    return parsed as T;
  }

  health(): Promise<{ status: string }> {
    return this.request('GET', '/healthz');
  }

  createPlan(doc: PlanDoc, force = false): Promise<SavedPlan> {
    return this.request('POST', `/v1/plans${force ? '?force=true' : ''}`, doc);
  }

  getPlan(id: string): Promise<StoredPlan> {
    return this.request('GET', `/v1/plans/${id}`);
  }

  putPlan(id: string, doc: PlanDoc, version: number, force = false): Promise<SavedPlan> {
    return this.request('PUT', `/v1/plans/${id}${force ? '?force=true' : ''}`, { ...doc, version });
  }

  deletePlan(id: string): Promise<void> {
    return this.request('DELETE', `/v1/plans/${id}`);
  }

  generateTables(id: string): Promise<{ id: string; version: number; plan: PlanDoc }> {
    return this.request('POST', `/v1/plans/${id}/tables:generate`);
  }

  verify(id: string, mode: 'static' | 'explore' | 'both' | 'lemma', bound?: number): Promise<VerifyResults> {
    return this.request('POST', `/v1/plans/${id}/verify`, bound === undefined ? { mode } : { mode, bound });
  }

  regions(id: string): Promise<RegionCatalogDoc> {
    return this.request('GET', `/v1/plans/${id}/regions`);
  }

  simCreate(id: string): Promise<SessionDoc> {
    return this.request('POST', `/v1/plans/${id}/sim`);
  }

  simGet(id: string, sid: string): Promise<SessionDoc> {
    return this.request('GET', `/v1/plans/${id}/sim/${sid}`);
  }

  simStep(id: string, sid: string, event: EventDoc): Promise<SessionDoc> {
    return this.request('POST', `/v1/plans/${id}/sim/${sid}/step`, { event });
  }

  simUndo(id: string, sid: string): Promise<SessionDoc> {
    return this.request('POST', `/v1/plans/${id}/sim/${sid}/undo`);
  }

  simLog(id: string, sid: string): Promise<{ session: string; events: EventDoc[] }> {
    return this.request('GET', `/v1/plans/${id}/sim/${sid}/log`);
  }
}
