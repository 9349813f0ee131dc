/** Typed client for the recommendation session service. */

export interface SelectionEntry {
  name: string;
  kind: "kpi" | "dimension" | null;
  custom: boolean;
  selected_at: number;
}

export interface SessionView {
  id: string;
  industry: string;
  business_process: string;
  goal: string;
  target_groups: string[];
  verbosity: number;
  alpha: number;
  selected: SelectionEntry[];
  created_at: number;
  updated_at: number;
}

export interface RecommendationItem {
  name: string;
  kind: "kpi" | "dimension" | null;
  score: number;
}

export interface RecommendationPage {
  session_id: string;
  verbosity: number;
  alpha: number;
  beta: number;
  verbosity_threshold: number;
  items: RecommendationItem[];
}

export interface Solution {
  session_id: string;
  elements: SelectionEntry[];
}

export interface TaxonomyNode {
  name: string;
  children: TaxonomyNode[];
}

export interface SessionCreate {
  industry: string;
  business_process: string;
  goal?: string;
  target_groups?: string[];
}

export interface ApiErrorDetail {
  code: string;
  message: string;
  field?: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly detail: ApiErrorDetail;

  constructor(status: number, detail: ApiErrorDetail) {
    super(detail.message);
    this.status = status;
    this.detail = detail;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!resp.ok) {
    let detail: ApiErrorDetail = { code: "unknown", message: resp.statusText };
    try {
      const body = (await resp.json()) as { detail?: ApiErrorDetail | string };
      if (typeof body.detail === "object" && body.detail !== null) {
        detail = body.detail;
      } else if (typeof body.detail === "string") {
        detail = { code: "unknown", message: body.detail };
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class SessionApi {
  constructor(private readonly baseUrl: string) {}

  createSession(body: SessionCreate): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  getRecommendations(id: string, limit = 10): Promise<RecommendationPage> {
    return request(`${this.baseUrl}/sessions/${id}/recommendations?limit=${limit}`);
  }

  selectElements(
    id: string,
    elements: { name: string; custom?: boolean }[],
  ): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions/${id}/selections`, {
      method: "POST",
      body: JSON.stringify({ elements }),
    });
  }

  getSolution(id: string): Promise<Solution> {
    return request(`${this.baseUrl}/sessions/${id}/solution`);
  }

  getTaxonomy(): Promise<TaxonomyNode> {
    return request(`${this.baseUrl}/meta/taxonomy`);
  }

  getProcesses(): Promise<{ processes: string[] }> {
    return request(`${this.baseUrl}/meta/processes`);
  }
}

/** Flatten a taxonomy tree into slash-joined leaf paths for the industry picker. */
export function leafPaths(node: TaxonomyNode, prefix = ""): string[] {
  const path = prefix ? `${prefix}/${node.name}` : node.name;
  if (node.children.length === 0) {
    return [path];
  }
  return node.children.flatMap((child) => leafPaths(child, path));
}

/**
 * Client-side copy of the mixing schedule, used only to cross-check the
 * server-reported value; the UI always displays the server's number.
 */
export function alphaSchedule(verbosity: number, threshold: number, beta: number): number {
  if (verbosity <= threshold) {
    return 1 - ((1 - beta) * verbosity) / threshold;
  }
  return beta;
}
