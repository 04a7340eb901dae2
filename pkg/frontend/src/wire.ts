/** Wire-format documents exchanged with the scheme-plan service (v1). */

export const FORMAT_VERSION = 1;

export type LinearDoc = { id: string; kind: 'linear'; endA: string; endB: string };
export type PointDoc = { id: string; kind: 'point'; stem: string; left: string; right: string };
export type UnitDoc = LinearDoc | PointDoc;

export type MarkerKind = 'entry' | 'exit' | 'boundary';
export type MarkerDoc = { name: string; kind: MarkerKind; at: string };

export type StepDoc = { unit: string; from: string; to: string };
export type RouteDoc = { id: string; steps: StepDoc[] };
export type ReleaseDoc = { point: string; clearedBy: string };

export type ConnectorLayout = { x: number; y: number };

export interface PlanDoc {
  formatVersion: number;
  name: string;
  units: UnitDoc[];
  markers: MarkerDoc[];
  routes: RouteDoc[];
  clear: Record<string, string[]>;
  release: Record<string, ReleaseDoc[]>;
  ext?: {
    pointPositions?: Record<string, Record<string, string[]>>;
    layout?: Record<string, ConnectorLayout>;
    [key: string]: unknown;
  };
}

export type ViolationDoc = { code: string; message: string; location: string };

export type RegionInfo = { name: string; units: string[] };
export interface RegionCatalogDoc {
  plan: string;
  regions: RegionInfo[];
  byRoute: Record<string, string[]>;
}

export type EventDoc =
  | { type: 'extend'; from: number | null; route: string }
  | { type: 'reduce'; ma: number };

/** A movement authority as reported by the service: a list of regions. */
export type MaDoc = string[][];

export interface SessionDoc {
  session: string;
  plan: string;
  step: number;
  state: MaDoc[];
  enabledEvents: EventDoc[];
}

export interface StaticRow {
  route: string;
  pass: boolean;
  missing: string[];
}

export interface VerifyResults {
  plan: string;
  mode: string;
  results: {
    static?: { allPass: boolean; mode: string; routes: StaticRow[] };
    explore?: {
      verdict: 'Safe' | 'Unsafe' | 'Inconclusive';
      counterexample?: EventDoc[];
      witness?: unknown;
      reason?: string;
      stats: { states: number; transitions: number; truncated: boolean };
    };
    lemma?: {
      allAgree: boolean;
      anyInconclusive: boolean;
      instances: {
        instance: string;
        agree: boolean;
        inconclusive: boolean;
        safety: string;
        routeCondition: string;
      }[];
    };
  };
}

export function connectorsOf(unit: UnitDoc): string[] {
  return unit.kind === 'linear' ? [unit.endA, unit.endB] : [unit.stem, unit.left, unit.right];
}

/** Structural schema check mirroring what the service will accept. */
export function isSchemaValidPlan(doc: unknown): doc is PlanDoc {
  if (typeof doc !== 'object' || doc === null) return false;
  const d = doc as Record<string, unknown>;
  if (d.formatVersion !== FORMAT_VERSION || typeof d.name !== 'string') return false;
  if (!Array.isArray(d.units) || !Array.isArray(d.markers) || !Array.isArray(d.routes)) return false;
  const ids = new Set<string>();
  for (const u of d.units as unknown[]) {
    const unit = u as Record<string, unknown>;
    if (typeof unit.id !== 'string' || ids.has(unit.id)) return false;
    ids.add(unit.id);
    if (unit.kind === 'linear') {
      if (typeof unit.endA !== 'string' || typeof unit.endB !== 'string') return false;
    } else if (unit.kind === 'point') {
      if (typeof unit.stem !== 'string' || typeof unit.left !== 'string' || typeof unit.right !== 'string')
        return false;
    } else {
      return false;
    }
  }
  for (const m of d.markers as unknown[]) {
    const marker = m as Record<string, unknown>;
    if (typeof marker.name !== 'string' || typeof marker.at !== 'string') return false;
    if (marker.kind !== 'entry' && marker.kind !== 'exit' && marker.kind !== 'boundary') return false;
  }
  for (const r of d.routes as unknown[]) {
    const route = r as Record<string, unknown>;
    if (typeof route.id !== 'string' || !Array.isArray(route.steps)) return false;
    for (const s of route.steps as unknown[]) {
      const step = s as Record<string, unknown>;
      if (typeof step.unit !== 'string' || typeof step.from !== 'string' || typeof step.to !== 'string')
        return false;
    }
  }
  if (typeof d.clear !== 'object' || d.clear === null || Array.isArray(d.clear)) return false;
  for (const units of Object.values(d.clear as Record<string, unknown>)) {
    if (!Array.isArray(units) || units.some((u) => typeof u !== 'string')) return false;
  }
  if (typeof d.release !== 'object' || d.release === null || Array.isArray(d.release)) return false;
  for (const entries of Object.values(d.release as Record<string, unknown>)) {
    if (!Array.isArray(entries)) return false;
    for (const e of entries as unknown[]) {
      const entry = e as Record<string, unknown>;
      if (typeof entry.point !== 'string' || typeof entry.clearedBy !== 'string') return false;
    }
  }
  return true;
}
