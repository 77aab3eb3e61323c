// Editor state and the controller that drives every interaction through the
// service.  The controller never mutates geometry locally except as an
// optimistic drag preview; whatever the server confirms replaces it.

import { ApiClient, ServiceError, SessionSummary, SpaceDocument } from "./api.js";

export type Tool = "drag" | "insert" | "elevate";

export interface EditorState {
  sessionId: string | null;
  version: number;
  K: number;
  domain: [number, number];
  breakpoints: number[];
  degrees: number[];
  continuities: number[];
  partitions: { starts: number[]; ends: number[] };
  controlPoints: number[][];
  previewPoints: number[][] | null; // optimistic drag overlay, never authoritative
  curveSamples: number[][];
  basisSamples: number[][];
  selectedTool: Tool;
  selectedPoint: number | null;
  selectedInterval: number;
  sliders: { alpha: number; beta: number; gamma: number };
  curvatureLock: boolean; // when on, gamma follows beta^2
  showBasis: boolean;
  toasts: string[];
  lastInvariance: { max_deviation: number; ok: boolean } | null;
}

export const initialState = (): EditorState => ({
  sessionId: null,
  version: 0,
  K: 0,
  domain: [0, 1],
  breakpoints: [],
  degrees: [],
  continuities: [],
  partitions: { starts: [], ends: [] },
  controlPoints: [],
  previewPoints: null,
  curveSamples: [],
  basisSamples: [],
  selectedTool: "drag",
  selectedPoint: null,
  selectedInterval: 0,
  sliders: { alpha: 1, beta: 0, gamma: 1 },
  curvatureLock: true,
  showBasis: true,
  toasts: [],
  lastInvariance: null,
});

export const SAMPLE_COUNT = 400;

export class EditorController {
  state: EditorState = initialState();
  onChange: (state: EditorState) => void = () => {};

  constructor(private api: ApiClient) {}

  private commit(summary: SessionSummary): void {
    const s = this.state;
    s.version = summary.version;
    s.K = summary.K;
    s.domain = summary.domain;
    s.breakpoints = summary.breakpoints;
    s.degrees = summary.degrees;
    s.continuities = summary.continuities;
    s.partitions = summary.partitions;
    s.controlPoints = summary.control_points;
    s.previewPoints = null;
    if (summary.invariance) s.lastInvariance = summary.invariance;
  }

  private toast(message: string): void {
    this.state.toasts.push(message);
    this.onChange(this.state);
  }

  async createSession(doc: SpaceDocument): Promise<void> {
    const summary = await this.api.createSession(doc);
    this.state = initialState();
    this.state.sessionId = summary.session_id;
    this.commit(summary);
    await this.refreshSamples();
  }

  async refreshSamples(): Promise<void> {
    const id = this.requireSession();
    const curve = await this.api.getSamples(id, "curve", SAMPLE_COUNT);
    this.state.curveSamples = curve.rows;
    if (this.state.showBasis) {
      const basis = await this.api.getSamples(id, "basis", SAMPLE_COUNT);
      this.state.basisSamples = basis.rows;
    }
    this.onChange(this.state);
  }

  /** Re-fetch the authoritative session state (after a version conflict). */
  async resync(): Promise<void> {
    const id = this.requireSession();
    const doc = await this.api.getDoc(id);
    this.commit(doc);
    await this.refreshSamples();
  }

  handleCount(): number {
    return this.state.controlPoints.length;
  }

  previewDrag(index: number, position: [number, number]): void {
    const pts = (this.state.previewPoints ?? this.state.controlPoints).map((p) => p.slice());
    pts[index] = [position[0], position[1]];
    this.state.previewPoints = pts;
    this.onChange(this.state);
  }

  async dragPoint(index: number, position: [number, number]): Promise<void> {
    const id = this.requireSession();
    this.previewDrag(index, position);
    try {
      const summary = await this.api.op(id, {
        op: "move_point",
        index,
        position,
        expected_version: this.state.version,
      });
      this.commit(summary);
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        // stale version: drop the preview, resync, retry once against the fresh state
        await this.resync();
        const summary = await this.api.op(id, {
          op: "move_point",
          index,
          position,
          expected_version: this.state.version,
        });
        this.commit(summary);
      } else {
        this.state.previewPoints = null;
        throw err;
      }
    }
    await this.refreshSamples();
  }

  private async mutate(body: Record<string, unknown>): Promise<SessionSummary | null> {
    const id = this.requireSession();
    try {
      const summary = await this.api.op(id, { ...body, expected_version: this.state.version });
      this.commit(summary);
      await this.refreshSamples();
      return summary;
    } catch (err) {
      if (err instanceof ServiceError && err.status === 422) {
        this.toast(err.message);
        return null;
      }
      throw err;
    }
  }

  insertKnot(x: number): Promise<SessionSummary | null> {
    return this.mutate({ op: "insert_knot", x });
  }

  elevate(interval: number, times = 1): Promise<SessionSummary | null> {
    return this.mutate({ op: "elevate", interval, times });
  }

  /** Apply the slider connection matrix at break-point index (1-based). */
  setConnection(index: number, alpha: number, beta: number, gamma?: number): Promise<SessionSummary | null> {
    // the curvature lock follows gamma = beta^2; beta = 0 degenerates to the
    // parametric C^2 case, whose matrix needs gamma = 1
    const locked = beta === 0 ? 1 : beta * beta;
    const g = this.state.curvatureLock ? locked : gamma ?? this.state.sliders.gamma;
    this.state.sliders = { alpha, beta, gamma: g };
    const k = this.state.continuities[index - 1];
    if (k !== 2) {
      this.toast(`break-point ${index} has continuity C^${k}; sliders need C^2`);
      return Promise.resolve(null);
    }
    const matrix = [
      [1, 0, 0],
      [0, alpha, 0],
      [0, beta, g],
    ];
    return this.mutate({ op: "set_connection", index, matrix });
  }

  async undo(): Promise<void> {
    const id = this.requireSession();
    try {
      const summary = await this.api.undo(id, this.state.version);
      this.commit(summary);
      await this.refreshSamples();
    } catch (err) {
      if (err instanceof ServiceError && err.status === 422) {
        this.toast(err.message);
        return;
      }
      throw err;
    }
  }

  private requireSession(): string {
    if (!this.state.sessionId) throw new Error("no active session");
    return this.state.sessionId;
  }
}
