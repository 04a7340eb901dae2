/** Browser bootstrap: mount the editor against a service on the same host. */

import { ApiClient } from './client.js';
import { EditorApp } from './app.js';
import { describeApiError, regionColor } from './panels.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function renderBadges(app: EditorApp): void {
  const list = el<HTMLUListElement>('badges');
  list.replaceChildren();
  for (const badge of app.verify.badges) {
    const item = document.createElement('li');
    item.className = `badge badge-${badge.status}`;
    item.textContent = `${badge.route}: ${badge.detail}`;
    list.appendChild(item);
  }
  const verdict = el<HTMLDivElement>('verdict');
  verdict.textContent = app.verify.verdict ?? '';
  verdict.className = `verdict verdict-${(app.verify.verdict ?? 'none').toLowerCase()}`;
  if (app.verify.boundHint) verdict.textContent += ` (${app.verify.boundHint})`;
}

function renderEvents(app: EditorApp): void {
  const list = el<HTMLUListElement>('events');
  list.replaceChildren();
  app.sim.enabledEvents.forEach((event, index) => {
    const item = document.createElement('li');
    const button = document.createElement('button');
    button.textContent =
      event.type === 'extend'
        ? `extend ${event.from === null ? 'new' : `MA ${event.from + 1}`} by ${event.route}`
        : `reduce MA ${event.ma + 1}`;
    button.onclick = async () => {
      await app.sim.step(index);
      app.showSimState();
      renderEvents(app);
      renderLegend(app);
    };
    item.appendChild(button);
    list.appendChild(item);
  });
}

function renderLegend(app: EditorApp): void {
  const legend = el<HTMLUListElement>('legend');
  legend.replaceChildren();
  for (const ma of app.sim.authorities()) {
    const item = document.createElement('li');
    item.textContent = ma.label;
    const firstRegion = ma.regions[0];
    if (firstRegion) item.style.color = regionColor(firstRegion.join('+'));
    legend.appendChild(item);
  }
}

function renderErrors(app: EditorApp): void {
  el<HTMLDivElement>('errors').textContent = app.errors.slice(-3).join('\n');
}

async function start(): Promise<void> {
  const client = new ApiClient(el<HTMLInputElement>('service-url').value || window.location.origin);
  const app = new EditorApp(client, document, 'Drawn');
  app.mount(el('canvas-host'));

  let counter = 0;
  el('add-linear').onclick = () => {
    app.addLinear(`L${++counter}`, { x: 40 + counter * 30, y: 120 });
    renderErrors(app);
  };
  el('add-point').onclick = () => {
    app.addPoint(`P${++counter}`, { x: 40 + counter * 30, y: 220 });
    renderErrors(app);
  };
  el('join').onclick = () => {
    const [a, b] = el<HTMLInputElement>('join-input').value.split(/\s+/);
    if (a && b) app.join(a, b);
    renderErrors(app);
  };
  el('add-marker').onclick = () => {
    const [kind, name, at] = el<HTMLInputElement>('marker-input').value.split(/\s+/);
    if (kind && name && at) app.addMarker(kind as never, name, at);
    renderErrors(app);
  };
  el('generate-tables').onclick = async () => {
    try {
      await app.tables.generate();
      app.refresh();
    } catch (err) {
      app.errors.push(describeApiError(err));
    }
    renderErrors(app);
  };
  el('verify-run').onclick = async () => {
    await app.runVerify('both');
    renderBadges(app);
    renderErrors(app);
  };
  el('sim-start').onclick = async () => {
    await app.sim.start();
    app.showSimState();
    renderEvents(app);
    renderLegend(app);
  };
  el('sim-undo').onclick = async () => {
    await app.sim.undo();
    app.showSimState();
    renderEvents(app);
    renderLegend(app);
  };
}

start().catch((err) => {
  document.body.textContent = `failed to start: ${err}`;
});
