import { describe, expect, it } from "vitest";

import { conflictMarkers, formatScore, renderTree } from "../src/tree.js";
import { conflict, tree } from "./helpers.js";

describe("conflictMarkers", () => {
  it("marks unresolved conflicts with an x per side", () => {
    const markers = conflictMarkers(
      [conflict({ base_feature: "f2", other_feature: "f9" })],
      "base",
    );
    expect(markers.get("f2")).toBe("conflict");
    expect(markers.has("f9")).toBe(false);
  });

  it("uses the other-side feature id for the right tree", () => {
    const markers = conflictMarkers(
      [conflict({ base_feature: "f2", other_feature: "f9" })],
      "other",
    );
    expect(markers.get("f9")).toBe("conflict");
  });

  it("turns resolved conflicts into checks", () => {
    const markers = conflictMarkers(
      [conflict({ status: "resolved", resolution: "keep_base" })],
      "base",
    );
    expect(markers.get("f2")).toBe("ok");
  });

  it("structural conflicts stay flagged even though they are report-only", () => {
    const markers = conflictMarkers(
      [conflict({ kind: "structural", resolvable: false })],
      "base",
    );
    expect(markers.get("f2")).toBe("conflict");
  });
});

describe("renderTree", () => {
  it("renders nested lists with FODA kind symbols", () => {
    const html = renderTree(tree());
    expect(html).toContain('class="feature-tree"');
    expect(html).toContain("■"); // root
    expect(html).toContain("○"); // optional child
    expect(html).toContain("Child");
  });

  it("attaches conflict badges from the marker map", () => {
    const markers = conflictMarkers([conflict({ base_feature: "f2" })], "base");
    const html = renderTree(tree(), markers);
    expect(html).toContain("badge-conflict");
    expect(html).toContain('data-feature="f2"');
  });

  it("escapes feature names", () => {
    const html = renderTree(
      tree({ name: "<script>alert(1)</script>", children: [] }),
    );
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("renders group members with arc symbols", () => {
    const html = renderTree(
      tree({
        children: [
          { id: "a", name: "A", rel_kind: "or_member", abstract: false, children: [] },
          { id: "b", name: "B", rel_kind: "xor_member", abstract: false, children: [] },
        ],
      }),
    );
    expect(html).toContain("◩");
    expect(html).toContain("◧");
  });
});

describe("formatScore", () => {
  it("always shows four decimals", () => {
    expect(formatScore(1)).toBe("1.0000");
    expect(formatScore(0.375)).toBe("0.3750");
  });
});
