/** Draw the two-platform pass-through station on an editor model, the same
 * interaction sequence a user would perform with the palette. */

import type { EditorModel } from '../src/editorModel.js';
import type { UnitDoc } from '../src/wire.js';

const ends = (u: UnitDoc) => (u.kind === 'linear' ? { a: u.endA, b: u.endB } : null);
const legs = (u: UnitDoc) => (u.kind === 'point' ? { stem: u.stem, left: u.left, right: u.right } : null);

export function drawStation(model: EditorModel): void {
  const la1 = ends(model.addLinear('LA1', { x: 20, y: 200 }))!;
  const p1 = legs(model.addPoint('P1', { x: 100, y: 200 }))!;
  const plat1 = ends(model.addLinear('PLAT1', { x: 180, y: 140 }))!;
  const plat2 = ends(model.addLinear('PLAT2', { x: 180, y: 200 }))!;
  const p2 = legs(model.addPoint('P2', { x: 300, y: 200 }))!;
  const la2 = ends(model.addLinear('LA2', { x: 380, y: 200 }))!;

  model.joinConnectors(la1.b, p1.stem);
  model.joinConnectors(p1.left, plat1.a);
  model.joinConnectors(p1.right, plat2.a);
  model.joinConnectors(plat1.b, p2.left);
  model.joinConnectors(plat2.b, p2.right);
  model.joinConnectors(p2.stem, la2.a);

  model.addMarker('entry', 'X', la1.a);
  model.addMarker('exit', 'Y', la2.b);
  model.addMarker('boundary', 'B1', plat1.b);
  model.addMarker('boundary', 'B2', plat2.b);
}
