// @vitest-environment jsdom

import { describe, expect, it } from 'vitest';

import { EditorModel } from '../src/editorModel.js';
import { PlanView } from '../src/view.js';
import { drawStation } from './station.js';

describe('svg view', () => {
  it('renders one group per unit and glyphs for markers', () => {
    const model = new EditorModel('Drawn');
    drawStation(model);
    const view = new PlanView(document);
    view.render(model);
    expect(view.root.querySelectorAll('[data-unit]')).toHaveLength(6);
    expect(view.root.querySelectorAll('.unit-point')).toHaveLength(2);
    expect(view.root.querySelectorAll('[data-marker]')).toHaveLength(4);
    expect(view.root.querySelectorAll('circle.connector')).toHaveLength(8);
  });

  it('applies and clears unit highlights', () => {
    const model = new EditorModel('Drawn');
    drawStation(model);
    const view = new PlanView(document);
    view.setHighlight(new Map([['PLAT1', 'hsl(10, 70%, 45%)']]));
    view.render(model);
    expect(view.highlightedUnits()).toEqual(new Map([['PLAT1', 'hsl(10, 70%, 45%)']]));
    view.clearHighlight();
    view.render(model);
    expect(view.highlightedUnits().size).toBe(0);
  });

  it('re-renders after edits without leaking nodes', () => {
    const model = new EditorModel();
    const view = new PlanView(document);
    model.addLinear('A', { x: 0, y: 0 });
    view.render(model);
    model.addLinear('B', { x: 100, y: 0 });
    view.render(model);
    expect(view.root.querySelectorAll('[data-unit]')).toHaveLength(2);
    model.removeUnit('A');
    view.render(model);
    expect(view.root.querySelectorAll('[data-unit]')).toHaveLength(1);
  });
});
