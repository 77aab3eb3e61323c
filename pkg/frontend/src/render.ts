// Canvas rendering: curve polyline, control polygon with handles, break-point
// markers, and an optional basis subplot.  All geometry comes from
// server-sampled polylines; nothing is recomputed locally.

import { EditorState } from "./state.js";

export interface ViewTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export const fitView = (
  state: EditorState,
  width: number,
  height: number,
  margin = 40,
): ViewTransform => {
  const pts = [
    ...state.controlPoints,
    ...state.curveSamples.map((row) => [row[1], row[2]]),
  ];
  if (!pts.length) return { scale: 1, offsetX: 0, offsetY: 0 };
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (const [x, y] of pts) {
    minX = Math.min(minX, x); maxX = Math.max(maxX, x);
    minY = Math.min(minY, y); maxY = Math.max(maxY, y);
  }
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  return {
    scale,
    offsetX: margin - minX * scale + (width - 2 * margin - spanX * scale) / 2,
    offsetY: height - margin + minY * scale,
  };
};

export const worldToCanvas = (p: number[], view: ViewTransform): [number, number] => [
  p[0] * view.scale + view.offsetX,
  view.offsetY - p[1] * view.scale,
];

export const canvasToWorld = (x: number, y: number, view: ViewTransform): [number, number] => [
  (x - view.offsetX) / view.scale,
  (view.offsetY - y) / view.scale,
];

const HANDLE_RADIUS = 6;

export const handleAt = (
  state: EditorState,
  view: ViewTransform,
  cx: number,
  cy: number,
): number | null => {
  const pts = state.previewPoints ?? state.controlPoints;
  for (let i = 0; i < pts.length; i++) {
    const [hx, hy] = worldToCanvas(pts[i], view);
    if ((hx - cx) ** 2 + (hy - cy) ** 2 <= (HANDLE_RADIUS + 3) ** 2) return i;
  }
  return null;
};

const polyline = (ctx: CanvasRenderingContext2D, pts: [number, number][]) => {
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
  ctx.stroke();
};

export const render = (
  ctx: CanvasRenderingContext2D,
  state: EditorState,
  width: number,
  height: number,
): ViewTransform => {
  ctx.clearRect(0, 0, width, height);
  const curveHeight = state.showBasis ? height * 0.68 : height;
  const view = fitView(state, width, curveHeight);

  // axes
  ctx.strokeStyle = "#d3d7de";
  ctx.lineWidth = 1;
  polyline(ctx, [worldToCanvas([0, 0], view), worldToCanvas([1, 0], view)]);

  if (state.curveSamples.length) {
    ctx.strokeStyle = "#1d4ed8";
    ctx.lineWidth = 2;
    polyline(ctx, state.curveSamples.map((row) => worldToCanvas([row[1], row[2]], view)));

    // break-point markers: nearest sampled parameter to each break-point
    ctx.fillStyle = "#111827";
    for (const bp of state.breakpoints) {
      let best = state.curveSamples[0];
      for (const row of state.curveSamples) {
        if (Math.abs(row[0] - bp) < Math.abs(best[0] - bp)) best = row;
      }
      const [mx, my] = worldToCanvas([best[1], best[2]], view);
      ctx.beginPath();
      ctx.arc(mx, my, 3.5, 0, Math.PI * 2);
      ctx.fill();
    }
  }

  const pts = state.previewPoints ?? state.controlPoints;
  if (pts.length) {
    ctx.strokeStyle = "rgba(234, 88, 12, 0.55)";
    ctx.lineWidth = 1;
    polyline(ctx, pts.map((p) => worldToCanvas(p, view)));
    pts.forEach((p, i) => {
      const [hx, hy] = worldToCanvas(p, view);
      ctx.beginPath();
      ctx.arc(hx, hy, HANDLE_RADIUS, 0, Math.PI * 2);
      ctx.fillStyle = i === state.selectedPoint ? "#ea580c" : "#fb923c";
      ctx.fill();
      ctx.strokeStyle = "#ffffff";
      ctx.stroke();
    });
  }

  if (state.showBasis && state.basisSamples.length) {
    renderBasisSubplot(ctx, state, width, height, curveHeight);
  }
  return view;
};

const BASIS_COLORS = [
  "#ef4444", "#f59e0b", "#84cc16", "#10b981", "#06b6d4",
  "#3b82f6", "#8b5cf6", "#d946ef", "#64748b", "#b45309", "#065f46",
];

const renderBasisSubplot = (
  ctx: CanvasRenderingContext2D,
  state: EditorState,
  width: number,
  height: number,
  top: number,
) => {
  const margin = 24;
  const h = height - top - margin;
  const [a, b] = state.domain;
  const sx = (x: number) => margin + ((x - a) / (b - a)) * (width - 2 * margin);
  const sy = (v: number) => top + margin / 2 + (1 - v) * h;
  const n = state.basisSamples[0].length - 1;
  for (let f = 1; f <= n; f++) {
    ctx.strokeStyle = BASIS_COLORS[(f - 1) % BASIS_COLORS.length];
    ctx.lineWidth = 1.25;
    polyline(ctx, state.basisSamples.map((row) => [sx(row[0]), sy(row[f])] as [number, number]));
  }
  // overlay of the row sums: visually flat at one when the basis is healthy
  ctx.strokeStyle = "#9ca3af";
  ctx.setLineDash([4, 4]);
  polyline(
    ctx,
    state.basisSamples.map((row) => {
      let sum = 0;
      for (let f = 1; f < row.length; f++) sum += row[f];
      return [sx(row[0]), sy(sum)] as [number, number];
    }),
  );
  ctx.setLineDash([]);
  ctx.fillStyle = "#6b7280";
  for (const bp of state.breakpoints) {
    ctx.fillRect(sx(bp) - 0.5, top + margin / 2, 1, h);
  }
};
