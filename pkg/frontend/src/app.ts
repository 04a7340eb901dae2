/** Editor application: palette + canvas + panels wired to the DOM.
 *
 * Interaction flows through the typed model and panel layers, so the whole
 * app can be driven programmatically (which is how the integration test
 * scripts it); the DOM here is a thin shell.
 */

import { ApiClient } from './client.js';
import { EditorModel, EditRejected } from './editorModel.js';
import { describeApiError, PlanSync, SimPanel, TablesPanel, VerifyPanel } from './panels.js';
import { PlanView } from './view.js';
import type { MarkerKind } from './wire.js';

export class EditorApp {
  readonly model: EditorModel;
  readonly sync: PlanSync;
  readonly tables: TablesPanel;
  readonly verify: VerifyPanel;
  readonly sim: SimPanel;
  readonly view: PlanView;
  readonly errors: string[] = [];

  constructor(
    readonly client: ApiClient,
    doc: Document,
    planName = 'Untitled',
  ) {
    this.model = new EditorModel(planName);
    this.sync = new PlanSync(client, this.model);
    this.tables = new TablesPanel(this.sync);
    this.verify = new VerifyPanel(this.sync);
    this.sim = new SimPanel(this.sync);
    this.view = new PlanView(doc);
  }

  /** Palette actions; rejected edits surface as inline error strings. */
  palette(action: () => void): boolean {
    try {
      action();
      this.refresh();
      return true;
    } catch (err) {
      if (err instanceof EditRejected) {
        this.errors.push(err.message);
        return false;
      }
      throw err;
    }
  }

  addLinear(id: string, at: { x: number; y: number }): boolean {
    return this.palette(() => this.model.addLinear(id, at));
  }

  addPoint(id: string, at: { x: number; y: number }): boolean {
    return this.palette(() => this.model.addPoint(id, at));
  }

  join(target: string, other: string): boolean {
    return this.palette(() => this.model.joinConnectors(target, other));
  }

  addMarker(kind: MarkerKind, name: string, at: string): boolean {
    return this.palette(() => this.model.addMarker(kind, name, at));
  }

  removeUnit(id: string): boolean {
    return this.palette(() => this.model.removeUnit(id));
  }

  refresh(): void {
    this.view.render(this.model);
  }

  async runVerify(mode: 'static' | 'explore' | 'both' | 'lemma'): Promise<void> {
    try {
      await this.verify.run(mode);
    } catch (err) {
      this.errors.push(describeApiError(err));
    }
  }

  /** Paint one played counterexample step onto the canvas. */
  showTraceStep(state: string[][][]): void {
    const colors = new Map<string, string>();
    for (const unit of this.verify.occupiedUnits(state)) colors.set(unit, '#c0392b');
    this.view.setHighlight(colors);
    this.refresh();
  }

  /** Paint the live simulation state (one colour per assigned region). */
  showSimState(): void {
    this.view.setHighlight(this.sim.unitColors());
    this.refresh();
  }

  mount(container: HTMLElement): void {
    container.appendChild(this.view.root as unknown as Node);
    this.refresh();
  }
}
