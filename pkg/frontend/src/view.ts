/** SVG rendering of the drawn plan: units as strokes between their
 * connectors' layout positions, markers as labelled glyphs, and an overlay
 * colouring units by assigned region during verification playback and
 * simulation. */

import type { EditorModel } from './editorModel.js';
import { connectorsOf, type UnitDoc } from './wire.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export class PlanView {
  readonly root: SVGSVGElement;
  private highlight = new Map<string, string>();

  constructor(private readonly doc: Document) {
    this.root = doc.createElementNS(SVG_NS, 'svg') as SVGSVGElement;
    this.root.setAttribute('viewBox', '0 0 900 420');
    this.root.setAttribute('class', 'plan-canvas');
  }

  setHighlight(colors: Map<string, string>): void {
    this.highlight = colors;
  }

  clearHighlight(): void {
    this.highlight = new Map();
  }

  render(model: EditorModel): void {
    while (this.root.firstChild) this.root.removeChild(this.root.firstChild);
    for (const unit of model.units.values()) {
      this.root.appendChild(this.renderUnit(model, unit));
    }
    for (const connector of model.connectors()) {
      const at = model.layout.get(connector);
      if (!at) continue;
      const dot = this.doc.createElementNS(SVG_NS, 'circle');
      dot.setAttribute('cx', String(at.x));
      dot.setAttribute('cy', String(at.y));
      dot.setAttribute('r', '3');
      dot.setAttribute('class', 'connector');
      dot.setAttribute('data-connector', connector);
      this.root.appendChild(dot);
    }
    for (const marker of model.markers.values()) {
      const at = model.layout.get(marker.at);
      if (!at) continue;
      const label = this.doc.createElementNS(SVG_NS, 'text');
      label.setAttribute('x', String(at.x));
      label.setAttribute('y', String(at.y - 8));
      label.setAttribute('class', `marker marker-${marker.kind}`);
      label.setAttribute('data-marker', marker.name);
      label.textContent = marker.kind === 'boundary' ? '|' : marker.name;
      this.root.appendChild(label);
    }
  }

  private renderUnit(model: EditorModel, unit: UnitDoc): SVGElement {
    const group = this.doc.createElementNS(SVG_NS, 'g');
    group.setAttribute('data-unit', unit.id);
    group.setAttribute('class', unit.kind === 'point' ? 'unit unit-point' : 'unit unit-linear');
    const color = this.highlight.get(unit.id);
    const pos = (c: string) => model.layout.get(c) ?? { x: 0, y: 0 };
    const segments: [string, string][] =
      unit.kind === 'linear'
        ? [[unit.endA, unit.endB]]
        : [
            [unit.stem, unit.left],
            [unit.stem, unit.right],
          ];
    for (const [a, b] of segments) {
      const line = this.doc.createElementNS(SVG_NS, 'line');
      const pa = pos(a);
      const pb = pos(b);
      line.setAttribute('x1', String(pa.x));
      line.setAttribute('y1', String(pa.y));
      line.setAttribute('x2', String(pb.x));
      line.setAttribute('y2', String(pb.y));
      line.setAttribute('stroke', color ?? '#333');
      line.setAttribute('stroke-width', color ? '6' : '3');
      group.appendChild(line);
    }
    const mid = pos(connectorsOf(unit)[0]!);
    const label = this.doc.createElementNS(SVG_NS, 'text');
    label.setAttribute('x', String(mid.x + 6));
    label.setAttribute('y', String(mid.y + 16));
    label.setAttribute('class', 'unit-label');
    label.textContent = unit.id;
    group.appendChild(label);
    return group;
  }

  unitElement(id: string): SVGElement | null {
    return this.root.querySelector(`[data-unit="${id}"]`);
  }

  highlightedUnits(): Map<string, string> {
    const out = new Map<string, string>();
    for (const group of this.root.querySelectorAll('[data-unit]')) {
      const line = group.querySelector('line');
      const width = line?.getAttribute('stroke-width');
      if (line && width === '6') out.set(group.getAttribute('data-unit')!, line.getAttribute('stroke')!);
    }
    return out;
  }
}
