/** Typed client for the session API. All numbers displayed in the UI come
 * from these payloads; the client never computes scores itself. */

export interface Report {
  estsin: number;
  estsem: number;
  estest: number;
  cee: number;
  syntactic_vector: number[];
  semantic_vector: number[];
  structural_vector: number[];
  f_denominator: number;
  c_denominator: number;
  mode: "automatic" | "semi_automatic";
}

export interface Conflict {
  id: number;
  kind: "name" | "relationship_kind" | "structural";
  base_feature: string;
  other_feature: string;
  base_value: string;
  other_value: string;
  resolvable: boolean;
  status: "resolved" | "unresolved";
  resolution: "keep_base" | "keep_other" | null;
}

export interface TreeNode {
  id: string;
  name: string;
  rel_kind: "mandatory" | "optional" | "or_member" | "xor_member";
  abstract: boolean;
  children: TreeNode[];
}

export interface SessionPayload {
  session_id: string;
  state: "created" | "awaiting_resolutions" | "finalized";
  report: Report;
  conflicts: Conflict[];
  base_tree: TreeNode;
  other_tree: TreeNode;
  base_name: string;
  other_name: string;
  post_report: Report | null;
  merged_tree: TreeNode | null;
}

export interface FinalizePayload {
  merged_xml: string;
  post_report: Report;
  merged_tree: TreeNode;
  state: string;
}

export interface ErrorPayload {
  error: string;
  diagnostics?: Record<string, { severity: string; location: string; message: string }[]>;
  unresolved?: number[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ErrorPayload,
  ) {
    super(payload.error);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body as ErrorPayload);
  }
  return body as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  };
}

export function createSession(
  baseXml: string,
  otherXml: string,
): Promise<SessionPayload> {
  return request("/api/sessions", post({ base_xml: baseXml, other_xml: otherXml }));
}

export function getSession(sessionId: string): Promise<SessionPayload> {
  return request(`/api/sessions/${sessionId}`);
}

export function resolveConflict(
  sessionId: string,
  conflictId: number,
  choice: "keep_base" | "keep_other",
): Promise<Conflict> {
  return request(
    `/api/sessions/${sessionId}/conflicts/${conflictId}/resolution`,
    post({ choice }),
  );
}

export function finalizeSession(sessionId: string): Promise<FinalizePayload> {
  return request(`/api/sessions/${sessionId}/finalize`, { method: "POST" });
}

export function mergedXmlUrl(sessionId: string): string {
  return `/api/sessions/${sessionId}/merged.xml`;
}
