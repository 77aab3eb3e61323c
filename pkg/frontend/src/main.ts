// DOM wiring for the curve editor.  The page talks to the session service at
// the same origin (serve the built assets via `mdspline serve --ui`).

import { ApiClient, SpaceDocument } from "./api.js";
import { canvasToWorld, handleAt, render, ViewTransform } from "./render.js";
import { EditorController } from "./state.js";

const RUNNING_EXAMPLE: SpaceDocument = {
  domain: [0, 7],
  breakpoints: [1, 3, 6],
  degrees: [1, 2, 4, 2],
  continuities: [0, 1, 2],
  control_points: [
    [0, 0], [2, 2.2], [4.4, 2.6], [6.2, 1.2], [5.4, -1.4], [2.6, -1.8], [0, 0],
  ],
};

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const main = () => {
  const canvas = $<HTMLCanvasElement>("editor-canvas");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");

  const api = new ApiClient("");
  const controller = new EditorController(api);
  let view: ViewTransform = { scale: 1, offsetX: 0, offsetY: 0 };
  let dragging: number | null = null;

  const toastBox = $("toasts");
  const status = $("status");

  const redraw = () => {
    const state = controller.state;
    view = render(ctx, state, canvas.width, canvas.height);
    status.textContent = state.sessionId
      ? `session ${state.sessionId} · v${state.version} · K=${state.K} · degrees [${state.degrees}]`
      + (state.lastInvariance ? ` · invariance ${state.lastInvariance.ok ? "ok" : "VIOLATED"}` : "")
      : "no session";
    while (toastBox.firstChild) toastBox.removeChild(toastBox.firstChild);
    for (const message of state.toasts.slice(-3)) {
      const div = document.createElement("div");
      div.className = "toast";
      div.textContent = message;
      toastBox.appendChild(div);
    }
  };
  controller.onChange = redraw;

  const run = (work: Promise<unknown>) => {
    work.then(redraw).catch((err) => {
      controller.state.toasts.push(String(err));
      redraw();
    });
  };

  $("btn-load").addEventListener("click", () => {
    const text = ($<HTMLTextAreaElement>("doc-input")).value.trim();
    const doc = text ? (JSON.parse(text) as SpaceDocument) : RUNNING_EXAMPLE;
    run(controller.createSession(doc));
  });
  $("btn-undo").addEventListener("click", () => run(controller.undo()));
  $("btn-elevate").addEventListener("click", () => {
    const interval = Number(($<HTMLInputElement>("interval-input")).value);
    run(controller.elevate(interval));
  });
  const toolInputs = document.querySelectorAll<HTMLInputElement>("input[name=tool]");
  toolInputs.forEach((input) =>
    input.addEventListener("change", () => {
      controller.state.selectedTool = input.value as typeof controller.state.selectedTool;
    }),
  );
  $<HTMLInputElement>("basis-toggle").addEventListener("change", (ev) => {
    controller.state.showBasis = (ev.target as HTMLInputElement).checked;
    run(controller.refreshSamples());
  });

  const sliderIds = ["alpha", "beta", "gamma"] as const;
  const applyConnection = () => {
    const alpha = Number($<HTMLInputElement>("slider-alpha").value);
    const beta = Number($<HTMLInputElement>("slider-beta").value);
    const gamma = Number($<HTMLInputElement>("slider-gamma").value);
    const index = Number($<HTMLInputElement>("connection-index").value);
    run(controller.setConnection(index, alpha, beta, gamma));
  };
  sliderIds.forEach((name) => $(`slider-${name}`).addEventListener("change", applyConnection));
  $<HTMLInputElement>("lock-toggle").addEventListener("change", (ev) => {
    controller.state.curvatureLock = (ev.target as HTMLInputElement).checked;
    $<HTMLInputElement>("slider-gamma").disabled = controller.state.curvatureLock;
  });

  canvas.addEventListener("mousedown", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const cx = ev.clientX - rect.left;
    const cy = ev.clientY - rect.top;
    const state = controller.state;
    if (state.selectedTool === "drag") {
      dragging = handleAt(state, view, cx, cy);
      state.selectedPoint = dragging;
      redraw();
    } else if (state.selectedTool === "insert") {
      // map the click's parameter location by its x position along the domain
      const [wx] = canvasToWorld(cx, cy, view);
      const [a, b] = state.domain;
      const nearest = state.curveSamples.reduce(
        (best, row) => (Math.abs(row[1] - wx) < Math.abs(best[1] - wx) ? row : best),
        state.curveSamples[0],
      );
      const x = Math.min(Math.max(nearest[0], a + 1e-9), b - 1e-9);
      run(controller.insertKnot(x));
    }
  });
  canvas.addEventListener("mousemove", (ev) => {
    if (dragging === null) return;
    const rect = canvas.getBoundingClientRect();
    const pos = canvasToWorld(ev.clientX - rect.left, ev.clientY - rect.top, view);
    controller.previewDrag(dragging, pos);
  });
  canvas.addEventListener("mouseup", (ev) => {
    if (dragging === null) return;
    const rect = canvas.getBoundingClientRect();
    const pos = canvasToWorld(ev.clientX - rect.left, ev.clientY - rect.top, view);
    const index = dragging;
    dragging = null;
    run(controller.dragPoint(index, pos));
  });

  ($<HTMLTextAreaElement>("doc-input")).value = JSON.stringify(RUNNING_EXAMPLE, null, 2);
  redraw();
};

main();
