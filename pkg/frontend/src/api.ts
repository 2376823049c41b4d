/** Typed client for the session service. Field names mirror the wire format
 * verbatim; the client never recomputes anything the server already reports.
 */

export interface RenderCircle {
  kind: "circle";
  radius: number;
}

export interface RenderPolygon {
  kind: "polygon";
  corners: [number, number][];
}

export type RenderBlock = RenderCircle | RenderPolygon;

export interface Facility {
  id: number;
  s: number;
  x: number;
  y: number;
  capacity: number;
  residual: number;
}

export interface StepInfo {
  customer: number;
  s: number;
  facility: number;
  cost: number;
}

export interface Snapshot {
  id: string;
  name: string;
  shape: unknown;
  metric: string;
  capacities: number[];
  perimeter: number;
  cycle_length: number;
  render: RenderBlock;
  facilities: Facility[];
  preset_arrivals: number[];
  placed: number[];
  steps: StepInfo[];
  last_step: { customer: number; facility: number; cost: number } | null;
  opt_assignment: number[];
  greedy_total: number;
  opt_total: number;
  ratio: number | null;
}

export interface CustomConfig {
  shape: unknown;
  metric: string;
  capacities: number[];
  name?: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let res: Response;
  try {
    res = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
  }
  const text = await res.text();
  let payload: unknown = null;
  if (text) {
    try {
      payload = JSON.parse(text);
    } catch {
      throw new ApiError(res.status, "bad_payload", "service sent invalid JSON");
    }
  }
  if (!res.ok) {
    const err = (payload as { error?: { code?: string; message?: string } })?.error;
    throw new ApiError(res.status, err?.code ?? "internal", err?.message ?? res.statusText);
  }
  return payload as T;
}

export class Api {
  constructor(private readonly base: string = "") {}

  cases(): Promise<string[]> {
    return request(`${this.base}/api/cases`);
  }

  createFromCase(caseSpec: string, replay = false): Promise<Snapshot> {
    return this.post("/api/sessions", { case: caseSpec, replay });
  }

  createCustom(config: CustomConfig): Promise<Snapshot> {
    return this.post("/api/sessions", config);
  }

  getSession(id: string): Promise<Snapshot> {
    return request(`${this.base}/api/sessions/${id}`);
  }

  place(id: string, s: number): Promise<Snapshot> {
    return this.post(`/api/sessions/${id}/customers`, { s });
  }

  undo(id: string): Promise<Snapshot> {
    return this.post(`/api/sessions/${id}/undo`, {});
  }

  reset(id: string): Promise<Snapshot> {
    return this.post(`/api/sessions/${id}/reset`, {});
  }

  async remove(id: string): Promise<void> {
    await request(`${this.base}/api/sessions/${id}`, { method: "DELETE" });
  }

  exportScenario(id: string): Promise<unknown> {
    return request(`${this.base}/api/sessions/${id}/export`);
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return request<T>(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
