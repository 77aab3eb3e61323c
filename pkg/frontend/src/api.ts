// Typed client for the spline session service (JSON over HTTP).

export interface SpaceDocument {
  domain: [number, number];
  breakpoints: number[];
  degrees: number[];
  continuities: number[];
  connections?: (number[] | number[][] | null)[];
  control_points?: number[][];
}

export interface SessionSummary {
  session_id: string;
  version: number;
  K: number;
  partitions: { starts: number[]; ends: number[] };
  breakpoints: number[];
  degrees: number[];
  continuities: number[];
  domain: [number, number];
  control_points: number[][];
  invariance?: { max_deviation: number; ok: boolean };
}

export interface SampleTable {
  version: number;
  headers: string[];
  rows: number[][];
}

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

const asError = async (res: Response): Promise<ServiceError> => {
  let detail = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // keep the status text
  }
  return new ServiceError(res.status, detail);
};

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!res.ok) throw await asError(res);
    return (await res.json()) as T;
  }

  createSession(doc: SpaceDocument): Promise<SessionSummary> {
    return this.request("/session", { method: "POST", body: JSON.stringify(doc) });
  }

  getDoc(sessionId: string): Promise<SessionSummary & { document: SpaceDocument }> {
    return this.request(`/session/${sessionId}/doc`);
  }

  getSamples(sessionId: string, what: "curve" | "basis" | "transitions", n: number): Promise<SampleTable> {
    return this.request(`/session/${sessionId}/samples?what=${what}&n=${n}`);
  }

  op(sessionId: string, body: Record<string, unknown>): Promise<SessionSummary> {
    return this.request(`/session/${sessionId}/op`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  undo(sessionId: string, expectedVersion?: number): Promise<SessionSummary> {
    return this.request(`/session/${sessionId}/undo`, {
      method: "POST",
      body: JSON.stringify(expectedVersion === undefined ? {} : { expected_version: expectedVersion }),
    });
  }
}
