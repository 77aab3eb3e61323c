// Rendering sanity with a stub 2D context: no DOM, just draw-call accounting.

import { describe, expect, it } from "vitest";

import { fitView, handleAt, render, worldToCanvas, canvasToWorld } from "../src/render.js";
import { initialState } from "../src/state.js";

interface Calls {
  arcs: number;
  strokes: number;
  clears: number;
}

const stubContext = (): { ctx: CanvasRenderingContext2D; calls: Calls } => {
  const calls: Calls = { arcs: 0, strokes: 0, clears: 0 };
  const noop = () => {};
  const ctx = {
    clearRect: () => { calls.clears += 1; },
    beginPath: noop,
    moveTo: noop,
    lineTo: noop,
    stroke: () => { calls.strokes += 1; },
    arc: () => { calls.arcs += 1; },
    fill: noop,
    fillRect: noop,
    setLineDash: noop,
    set strokeStyle(_v: unknown) {},
    set fillStyle(_v: unknown) {},
    set lineWidth(_v: unknown) {},
  } as unknown as CanvasRenderingContext2D;
  return { ctx, calls };
};

const sessionState = () => {
  const state = initialState();
  state.sessionId = "test";
  state.domain = [0, 7];
  state.breakpoints = [1, 3, 6];
  state.controlPoints = [
    [0, 0], [2, 2.2], [4.4, 2.6], [6.2, 1.2], [5.4, -1.4], [2.6, -1.8], [0, 0],
  ];
  state.curveSamples = Array.from({ length: 50 }, (_, i) => {
    const x = (7 * i) / 49;
    return [x, x, Math.sin(x)];
  });
  state.basisSamples = Array.from({ length: 50 }, (_, i) => {
    const x = (7 * i) / 49;
    return [x, 0.5, 0.5];
  });
  return state;
};

describe("render", () => {
  it("draws one handle per control point", () => {
    const { ctx, calls } = stubContext();
    const state = sessionState();
    render(ctx, state, 900, 640);
    // 7 handles + 3 break-point markers
    expect(calls.arcs).toBe(10);
    expect(calls.clears).toBe(1);
    expect(calls.strokes).toBeGreaterThan(3);
  });

  it("empty session still renders axes only", () => {
    const { ctx, calls } = stubContext();
    render(ctx, initialState(), 900, 640);
    expect(calls.clears).toBe(1);
    expect(calls.arcs).toBe(0);
  });

  it("view transform round-trips", () => {
    const state = sessionState();
    const view = fitView(state, 900, 640);
    for (const p of state.controlPoints) {
      const [cx, cy] = worldToCanvas(p, view);
      const [wx, wy] = canvasToWorld(cx, cy, view);
      expect(wx).toBeCloseTo(p[0], 9);
      expect(wy).toBeCloseTo(p[1], 9);
    }
  });

  it("hit-tests handles in canvas coordinates", () => {
    const state = sessionState();
    const view = fitView(state, 900, 640);
    const [cx, cy] = worldToCanvas(state.controlPoints[3], view);
    expect(handleAt(state, view, cx + 2, cy - 2)).toBe(3);
    expect(handleAt(state, view, cx + 200, cy)).not.toBe(3);
  });
});
