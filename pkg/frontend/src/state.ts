/** Pure session-view state machine.
 *
 * Mirrors the server's legal transitions so illegal actions become disabled
 * buttons rather than failing requests; a 409 on a resolution means the view
 * drifted and must re-sync from the authoritative GET.
 */

import {
  ApiError,
  Conflict,
  SessionPayload,
  getSession,
  resolveConflict,
} from "./api.js";

export interface ViewState {
  session: SessionPayload | null;
  uploadError: string | null;
  /** conflict ids with an in-flight resolution request */
  pending: Set<number>;
  selectedConflict: number | null;
  mergedXml: string | null;
  notice: string | null;
}

export function initialState(): ViewState {
  return {
    session: null,
    uploadError: null,
    pending: new Set(),
    selectedConflict: null,
    mergedXml: null,
    notice: null,
  };
}

export function withSession(state: ViewState, session: SessionPayload): ViewState {
  const firstUnresolved = session.conflicts.find(
    (c) => c.resolvable && c.status === "unresolved",
  );
  return {
    ...state,
    session,
    uploadError: null,
    pending: new Set(),
    selectedConflict: firstUnresolved ? firstUnresolved.id : null,
    notice: null,
  };
}

export function unresolvedCount(session: SessionPayload): number {
  return session.conflicts.filter((c) => c.resolvable && c.status === "unresolved")
    .length;
}

export function canFinalize(state: ViewState): boolean {
  const s = state.session;
  return (
    s !== null &&
    s.state === "awaiting_resolutions" &&
    unresolvedCount(s) === 0 &&
    state.pending.size === 0
  );
}

export function canResolve(state: ViewState, conflictId: number): boolean {
  const s = state.session;
  if (s === null || s.state !== "awaiting_resolutions") return false;
  if (state.pending.has(conflictId)) return false;
  const conflict = s.conflicts.find((c) => c.id === conflictId);
  return !!conflict && conflict.resolvable && conflict.status === "unresolved";
}

/** Optimistic local application of a resolution, pending confirmation. */
export function markPending(state: ViewState, conflictId: number): ViewState {
  const pending = new Set(state.pending);
  pending.add(conflictId);
  return { ...state, pending };
}

export function applyResolved(state: ViewState, confirmed: Conflict): ViewState {
  const s = state.session;
  if (s === null) return state;
  const conflicts = s.conflicts.map((c) => (c.id === confirmed.id ? confirmed : c));
  const pending = new Set(state.pending);
  pending.delete(confirmed.id);
  const next = conflicts.find((c) => c.resolvable && c.status === "unresolved");
  return {
    ...state,
    session: { ...s, conflicts },
    pending,
    selectedConflict: next ? next.id : null,
  };
}

/**
 * Drive one resolution round-trip. On a 409 (duplicate click, stale view)
 * the view re-syncs from the server instead of surfacing an error.
 */
export async function resolveAndSync(
  state: ViewState,
  conflictId: number,
  choice: "keep_base" | "keep_other",
): Promise<ViewState> {
  if (!canResolve(state, conflictId) || state.session === null) {
    return state;
  }
  const sessionId = state.session.session_id;
  const optimistic = markPending(state, conflictId);
  try {
    const confirmed = await resolveConflict(sessionId, conflictId, choice);
    return applyResolved(optimistic, confirmed);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      const fresh = await getSession(sessionId);
      return {
        ...withSession(optimistic, fresh),
        notice: `Conflict #${conflictId}: ${err.payload.error}`,
      };
    }
    throw err;
  }
}

export function scoreRows(
  session: SessionPayload,
): { label: string; value: number }[] {
  const rows = [
    { label: "Syntactic", value: session.report.estsin },
    { label: "Semantic", value: session.report.estsem },
    { label: "Structural", value: session.report.estest },
    { label: "Global (CEE)", value: session.report.cee },
  ];
  if (session.post_report) {
    rows.push({ label: "Post-merge CEE", value: session.post_report.cee });
  }
  return rows;
}
