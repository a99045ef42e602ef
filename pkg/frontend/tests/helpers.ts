import { Conflict, Report, SessionPayload, TreeNode } from "../src/api.js";

export function report(overrides: Partial<Report> = {}): Report {
  return {
    estsin: 0.9,
    estsem: 0.8,
    estest: 0.7,
    cee: 0.8,
    syntactic_vector: [1, 0.8],
    semantic_vector: [1, 0.6],
    structural_vector: [1, 0.4],
    f_denominator: 2,
    c_denominator: 2,
    mode: "semi_automatic",
    ...overrides,
  };
}

export function conflict(overrides: Partial<Conflict> = {}): Conflict {
  return {
    id: 1,
    kind: "relationship_kind",
    base_feature: "f2",
    other_feature: "f2",
    base_value: "mandatory",
    other_value: "optional",
    resolvable: true,
    status: "unresolved",
    resolution: null,
    ...overrides,
  };
}

export function tree(overrides: Partial<TreeNode> = {}): TreeNode {
  return {
    id: "f1",
    name: "Root",
    rel_kind: "mandatory",
    abstract: false,
    children: [
      {
        id: "f2",
        name: "Child",
        rel_kind: "optional",
        abstract: false,
        children: [],
      },
    ],
    ...overrides,
  };
}

export function session(overrides: Partial<SessionPayload> = {}): SessionPayload {
  return {
    session_id: "tok123",
    state: "awaiting_resolutions",
    report: report(),
    conflicts: [conflict()],
    base_tree: tree(),
    other_tree: tree(),
    base_name: "base",
    other_name: "other",
    post_report: null,
    merged_tree: null,
    ...overrides,
  };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
