/** Editable plan state behind the drawing canvas.
 *
 * Every mutation keeps the document schema-valid; constructions the core
 * model would reject (a third unit on a connector, an entry marker on a
 * shared connector, a linear joined to itself) are refused up front with
 * the same violation message the service would report.  Layout coordinates
 * live in the wire document's `ext.layout` so the core ignores them.
 */

import {
  connectorsOf,
  FORMAT_VERSION,
  type ConnectorLayout,
  type MarkerDoc,
  type MarkerKind,
  type PlanDoc,
  type ReleaseDoc,
  type RouteDoc,
  type UnitDoc,
} from './wire.js';

export class EditRejected extends Error {}

let fresh = 0;
const freshId = (prefix: string) => `${prefix}${++fresh}`;

export class EditorModel {
  name: string;
  units = new Map<string, UnitDoc>();
  markers = new Map<string, MarkerDoc>();
  routes = new Map<string, RouteDoc>();
  clear = new Map<string, string[]>();
  release = new Map<string, ReleaseDoc[]>();
  pointPositions: Record<string, Record<string, string[]>> = {};
  layout = new Map<string, ConnectorLayout>();

  constructor(name = 'Untitled') {
    this.name = name;
  }

  // -- queries ------------------------------------------------------------

  connectorDegree(connector: string): number {
    let n = 0;
    for (const unit of this.units.values()) {
      if (connectorsOf(unit).includes(connector)) n += 1;
    }
    return n;
  }

  connectors(): string[] {
    const out = new Set<string>();
    for (const unit of this.units.values()) for (const c of connectorsOf(unit)) out.add(c);
    return [...out];
  }

  /** Routes whose steps reference a unit that no longer exists. */
  brokenRoutes(): string[] {
    return [...this.routes.values()]
      .filter((r) => r.steps.some((s) => !this.units.has(s.unit)))
      .map((r) => r.id);
  }

  isEmpty(): boolean {
    return this.units.size === 0;
  }

  // -- palette operations ---------------------------------------------------

  addLinear(id: string, at: { x: number; y: number }): UnitDoc {
    this.requireFreshUnitId(id);
    const unit: UnitDoc = { id, kind: 'linear', endA: freshId('c'), endB: freshId('c') };
    this.units.set(id, unit);
    this.layout.set(unit.endA, { x: at.x, y: at.y });
    this.layout.set(unit.endB, { x: at.x + 60, y: at.y });
    return unit;
  }

  addPoint(id: string, at: { x: number; y: number }): UnitDoc {
    this.requireFreshUnitId(id);
    const unit: UnitDoc = {
      id,
      kind: 'point',
      stem: freshId('c'),
      left: freshId('c'),
      right: freshId('c'),
    };
    this.units.set(id, unit);
    this.layout.set(unit.stem, { x: at.x, y: at.y });
    this.layout.set(unit.left, { x: at.x + 60, y: at.y - 30 });
    this.layout.set(unit.right, { x: at.x + 60, y: at.y });
    return unit;
  }

  /** Join two connectors into one (the `target` name survives). */
  joinConnectors(target: string, other: string): void {
    if (target === other) return;
    const degree = this.connectorDegree(target) + this.connectorDegree(other);
    if (degree > 2) {
      throw new EditRejected(`connector ${target} would join ${degree} units; at most 2 allowed`);
    }
    for (const [id, unit] of this.units) {
      const renamed = this.renameConnector(unit, other, target);
      if (renamed !== unit) {
        if (new Set(connectorsOf(renamed)).size !== connectorsOf(renamed).length) {
          throw new EditRejected(
            unit.kind === 'linear'
              ? `linear ${unit.id} joins ${target} to itself`
              : `point ${unit.id} connectors must be pairwise distinct`,
          );
        }
        this.units.set(id, renamed);
      }
    }
    for (const [name, marker] of this.markers) {
      if (marker.at === other) this.markers.set(name, { ...marker, at: target });
    }
    this.layout.delete(other);
  }

  private renameConnector(unit: UnitDoc, from: string, to: string): UnitDoc {
    const swap = (c: string) => (c === from ? to : c);
    if (!connectorsOf(unit).includes(from)) return unit;
    if (unit.kind === 'linear') return { ...unit, endA: swap(unit.endA), endB: swap(unit.endB) };
    return { ...unit, stem: swap(unit.stem), left: swap(unit.left), right: swap(unit.right) };
  }

  addMarker(kind: MarkerKind, name: string, at: string): void {
    if (this.markers.has(name)) throw new EditRejected(`duplicate marker name ${name}`);
    const degree = this.connectorDegree(at);
    if (degree === 0) {
      throw new EditRejected(`marker ${name} sits at unattached connector ${at}`);
    }
    if ((kind === 'entry' || kind === 'exit') && degree !== 1) {
      throw new EditRejected(`${kind} marker ${name} must attach to exactly one unit, found ${degree}`);
    }
    this.markers.set(name, { name, kind, at });
  }

  removeMarker(name: string): void {
    this.markers.delete(name);
  }

  removeUnit(id: string): void {
    const unit = this.units.get(id);
    if (!unit) return;
    this.units.delete(id);
    for (const c of connectorsOf(unit)) {
      if (this.connectorDegree(c) === 0) {
        this.layout.delete(c);
        for (const [name, marker] of [...this.markers]) {
          if (marker.at === c) this.markers.delete(name);
        }
      }
    }
    // routes referencing the unit stay, flagged broken, until edited
  }

  moveConnector(connector: string, to: ConnectorLayout): void {
    this.layout.set(connector, to);
  }

  // -- table editing --------------------------------------------------------

  setClear(routeId: string, units: string[]): void {
    if (!this.routes.has(routeId)) throw new EditRejected(`no route ${routeId}`);
    this.clear.set(routeId, [...units]);
  }

  setRelease(routeId: string, entries: ReleaseDoc[]): void {
    if (!this.routes.has(routeId)) throw new EditRejected(`no route ${routeId}`);
    this.release.set(routeId, entries.map((e) => ({ ...e })));
  }

  // -- wire sync --------------------------------------------------------------

  toWire(): PlanDoc {
    const doc: PlanDoc = {
      formatVersion: FORMAT_VERSION,
      name: this.name,
      units: [...this.units.values()],
      markers: [...this.markers.values()],
      routes: [...this.routes.values()],
      clear: Object.fromEntries([...this.clear].map(([k, v]) => [k, [...v]])),
      release: Object.fromEntries([...this.release].map(([k, v]) => [k, v.map((e) => ({ ...e }))])),
    };
    const ext: NonNullable<PlanDoc['ext']> = {};
    if (Object.keys(this.pointPositions).length) ext.pointPositions = this.pointPositions;
    if (this.layout.size) ext.layout = Object.fromEntries(this.layout);
    if (Object.keys(ext).length) doc.ext = ext;
    return doc;
  }

  loadWire(doc: PlanDoc): void {
    this.name = doc.name;
    this.units = new Map(doc.units.map((u) => [u.id, u]));
    this.markers = new Map((doc.markers ?? []).map((m) => [m.name, m]));
    this.routes = new Map((doc.routes ?? []).map((r) => [r.id, r]));
    this.clear = new Map(Object.entries(doc.clear ?? {}));
    this.release = new Map(Object.entries(doc.release ?? {}));
    this.pointPositions = doc.ext?.pointPositions ?? {};
    const layout = doc.ext?.layout ?? {};
    this.layout = new Map(Object.entries(layout));
    this.autoLayoutMissing();
  }

  /** Give coordinates to connectors the document did not place. */
  private autoLayoutMissing(): void {
    let x = 0;
    for (const unit of this.units.values()) {
      for (const c of connectorsOf(unit)) {
        if (!this.layout.has(c)) {
          this.layout.set(c, { x: (x += 80), y: 200 });
        }
      }
    }
  }

  private requireFreshUnitId(id: string): void {
    if (this.units.has(id)) throw new EditRejected(`duplicate unit id ${id}`);
  }
}
