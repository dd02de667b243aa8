import { describe, expect, it } from "vitest";

import type { VariantDag } from "../src/api";
import { assignLayers, layoutVariant } from "../src/layout";

import queryResponse from "./fixtures/query_response.json";

const caseOneDag = (queryResponse as { matched_variants: VariantDag[] })
  .matched_variants[0];

function chainDag(labels: string[]): VariantDag {
  return {
    key: "k",
    count: 1,
    nodes: labels.map((label, i) => ({ id: String(i + 1), label })),
    edges: labels.slice(1).map((_, i) => [String(i + 1), String(i + 2)]),
  };
}

describe("layer assignment", () => {
  it("sends every edge strictly rightwards", () => {
    const layers = assignLayers(caseOneDag.nodes, caseOneDag.edges);
    for (const [from, to] of caseOneDag.edges) {
      expect(layers.get(from)!).toBeLessThan(layers.get(to)!);
    }
  });

  it("lays a chain out one node per layer", () => {
    const dag = chainDag(["A", "B", "C", "D"]);
    const layers = assignLayers(dag.nodes, dag.edges);
    expect([...layers.values()].sort()).toEqual([0, 1, 2, 3]);
  });

  it("puts an antichain into a single layer", () => {
    const dag: VariantDag = {
      key: "k",
      count: 1,
      nodes: [
        { id: "1", label: "A" },
        { id: "2", label: "B" },
        { id: "3", label: "C" },
      ],
      edges: [],
    };
    const layers = assignLayers(dag.nodes, dag.edges);
    expect(new Set(layers.values())).toEqual(new Set([0]));
  });
});

describe("variant layout", () => {
  it("is deterministic", () => {
    const a = layoutVariant(caseOneDag);
    const b = layoutVariant(caseOneDag);
    expect(a).toEqual(b);
  });

  it("places the example trace across ten positions with increasing x", () => {
    const layout = layoutVariant(caseOneDag);
    expect(layout.nodes).toHaveLength(10);
    const byId = new Map(layout.nodes.map((n) => [n.id, n]));
    for (const edge of layout.edges) {
      expect(byId.get(edge.from)!.x).toBeLessThan(byId.get(edge.to)!.x);
    }
    // parallel information requests share a layer
    const rip = layout.nodes.find((n) => n.label === "RIP")!;
    const rit = layout.nodes.find((n) => n.label === "RIT")!;
    expect(rip.layer).toBe(rit.layer);
    expect(rip.y).not.toBe(rit.y);
  });

  it("keeps coordinates finite and inside the reported canvas", () => {
    const layout = layoutVariant(caseOneDag);
    for (const node of layout.nodes) {
      expect(Number.isFinite(node.x)).toBe(true);
      expect(Number.isFinite(node.y)).toBe(true);
      expect(node.x).toBeGreaterThanOrEqual(0);
      expect(node.x).toBeLessThanOrEqual(layout.width);
      expect(node.y).toBeGreaterThanOrEqual(0);
      expect(node.y).toBeLessThanOrEqual(layout.height);
    }
  });
});
