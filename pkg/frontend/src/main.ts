/** DOM wiring for the conflict-resolution workflow. */

import {
  ApiError,
  createSession,
  finalizeSession,
  mergedXmlUrl,
} from "./api.js";
import {
  ViewState,
  canFinalize,
  canResolve,
  initialState,
  resolveAndSync,
  scoreRows,
  unresolvedCount,
  withSession,
} from "./state.js";
import { conflictMarkers, formatScore, renderTree } from "./tree.js";

let state: ViewState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function readFile(input: HTMLInputElement): Promise<string | null> {
  const file = input.files && input.files[0];
  if (!file) return null;
  return file.text();
}

function kindLabel(kind: string): string {
  return kind.replace(/_/g, " ");
}

function render(): void {
  const session = state.session;
  const scores = el("scores");
  const conflictsPanel = el("conflicts");
  const baseTree = el("base-tree");
  const otherTree = el("other-tree");
  const finalizeBtn = el<HTMLButtonElement>("finalize");
  const downloadLink = el<HTMLAnchorElement>("download");
  const noticeBox = el("notice");
  const errorBox = el("upload-error");

  errorBox.textContent = state.uploadError ?? "";
  noticeBox.textContent = state.notice ?? "";

  if (!session) {
    scores.innerHTML = "";
    conflictsPanel.innerHTML = "";
    baseTree.innerHTML = "";
    otherTree.innerHTML = "";
    finalizeBtn.disabled = true;
    downloadLink.hidden = true;
    return;
  }

  scores.innerHTML = scoreRows(session)
    .map(
      (row) =>
        `<div class="score"><span>${row.label}</span>` +
        `<strong>${formatScore(row.value)}</strong></div>`,
    )
    .join("");

  baseTree.innerHTML =
    `<h3>${session.base_name}</h3>` +
    renderTree(session.base_tree, conflictMarkers(session.conflicts, "base"));
  otherTree.innerHTML =
    `<h3>${session.other_name}</h3>` +
    renderTree(session.other_tree, conflictMarkers(session.conflicts, "other"));

  if (session.conflicts.length === 0) {
    conflictsPanel.innerHTML = "<p>No conflicts.</p>";
  } else {
    conflictsPanel.innerHTML = session.conflicts
      .map((c) => {
        const resolved = c.status === "resolved";
        const classes = [
          "conflict",
          resolved ? "resolved" : "",
          state.selectedConflict === c.id ? "selected" : "",
        ]
          .filter(Boolean)
          .join(" ");
        const decision = resolved
          ? `<em>${c.resolution === "keep_base" ? "kept base" : "kept other"}</em>`
          : c.resolvable
            ? `<button data-resolve="${c.id}" data-choice="keep_base"` +
              `${canResolve(state, c.id) ? "" : " disabled"}>keep base</button>` +
              `<button data-resolve="${c.id}" data-choice="keep_other"` +
              `${canResolve(state, c.id) ? "" : " disabled"}>keep other</button>`
            : "<em>report only</em>";
        return (
          `<div class="${classes}" data-conflict="${c.id}" ` +
          `data-base-feature="${c.base_feature}" data-other-feature="${c.other_feature}">` +
          `<span>#${c.id} [${kindLabel(c.kind)}] ` +
          `${c.base_value} vs ${c.other_value}</span>${decision}</div>`
        );
      })
      .join("");
  }

  finalizeBtn.disabled = !canFinalize(state);
  const finalized = session.state === "finalized";
  downloadLink.hidden = !finalized;
  if (finalized) {
    downloadLink.href = mergedXmlUrl(session.session_id);
  }
  el("status").textContent = finalized
    ? "Finalized"
    : `${unresolvedCount(session)} conflict(s) to resolve`;
}

function highlight(conflictDiv: HTMLElement): void {
  for (const tree of [el("base-tree"), el("other-tree")]) {
    tree
      .querySelectorAll(".highlight")
      .forEach((n) => n.classList.remove("highlight"));
  }
  const baseId = conflictDiv.dataset.baseFeature;
  const otherId = conflictDiv.dataset.otherFeature;
  el("base-tree")
    .querySelector(`[data-feature="${baseId}"]`)
    ?.classList.add("highlight");
  el("other-tree")
    .querySelector(`[data-feature="${otherId}"]`)
    ?.classList.add("highlight");
}

async function onUpload(): Promise<void> {
  const baseXml = await readFile(el<HTMLInputElement>("base-file"));
  const otherXml = await readFile(el<HTMLInputElement>("other-file"));
  if (!baseXml || !otherXml) {
    state = { ...state, uploadError: "Select both model files first." };
    render();
    return;
  }
  try {
    const session = await createSession(baseXml, otherXml);
    state = withSession(state, session);
  } catch (err) {
    const message =
      err instanceof ApiError
        ? err.payload.diagnostics
          ? Object.entries(err.payload.diagnostics)
              .flatMap(([label, items]) =>
                items.map((d) => `${label}: ${d.message}`),
              )
              .join("; ")
          : err.payload.error
        : String(err);
    state = { ...state, uploadError: message };
  }
  render();
}

async function onFinalize(): Promise<void> {
  if (!canFinalize(state) || !state.session) return;
  const sessionId = state.session.session_id;
  try {
    const result = await finalizeSession(sessionId);
    state = {
      ...state,
      mergedXml: result.merged_xml,
      session: {
        ...state.session,
        state: "finalized",
        post_report: result.post_report,
        merged_tree: result.merged_tree,
      },
    };
  } catch (err) {
    if (err instanceof ApiError) {
      state = { ...state, notice: err.payload.error };
    } else {
      throw err;
    }
  }
  render();
}

function init(): void {
  el("upload").addEventListener("click", () => void onUpload());
  el("finalize").addEventListener("click", () => void onFinalize());
  el("conflicts").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const conflictDiv = target.closest<HTMLElement>("[data-conflict]");
    if (conflictDiv) {
      state = { ...state, selectedConflict: Number(conflictDiv.dataset.conflict) };
      highlight(conflictDiv);
    }
    const resolveId = target.dataset.resolve;
    const choice = target.dataset.choice as "keep_base" | "keep_other" | undefined;
    if (resolveId && choice) {
      void resolveAndSync(state, Number(resolveId), choice).then((next) => {
        state = next;
        render();
      });
    }
    render();
  });
  render();
}

document.addEventListener("DOMContentLoaded", init);
