/** Render a feature tree payload as HTML.
 *
 * Markers follow the FODA vocabulary: filled circle mandatory, open circle
 * optional, filled arc OR members, open arc XOR members. Conflicting
 * features get an "x" badge, matched-and-agreeing ones a check.
 */

import { Conflict, TreeNode } from "./api.js";

const KIND_SYMBOL: Record<TreeNode["rel_kind"], string> = {
  mandatory: "●",
  optional: "○",
  or_member: "◩",
  xor_member: "◧",
};

export type MarkerMap = Map<string, "conflict" | "ok">;

/** Which features carry an x (in conflict) on each side. */
export function conflictMarkers(
  conflicts: Conflict[],
  side: "base" | "other",
): MarkerMap {
  const markers: MarkerMap = new Map();
  for (const c of conflicts) {
    const fid = side === "base" ? c.base_feature : c.other_feature;
    if (c.status === "unresolved" || !c.resolvable) {
      markers.set(fid, "conflict");
    } else if (!markers.has(fid)) {
      markers.set(fid, "ok");
    }
  }
  return markers;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderNode(node: TreeNode, markers: MarkerMap, isRoot: boolean): string {
  const symbol = isRoot ? "■" : KIND_SYMBOL[node.rel_kind];
  const mark = markers.get(node.id);
  const badge =
    mark === "conflict"
      ? '<span class="badge badge-conflict">x</span>'
      : mark === "ok"
        ? '<span class="badge badge-ok">✓</span>'
        : "";
  const label = `<span class="kind">${symbol}</span> ${escapeHtml(node.name)}${badge}`;
  const children = node.children
    .map((child) => renderNode(child, markers, false))
    .join("");
  const childList = children ? `<ul>${children}</ul>` : "";
  const classes = mark === "conflict" ? ' class="conflicted"' : "";
  return `<li${classes} data-feature="${escapeHtml(node.id)}">${label}${childList}</li>`;
}

export function renderTree(root: TreeNode, markers: MarkerMap = new Map()): string {
  return `<ul class="feature-tree">${renderNode(root, markers, true)}</ul>`;
}

export function formatScore(value: number): string {
  return value.toFixed(4);
}
