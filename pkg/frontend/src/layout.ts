/**
 * Layered left-to-right layout for variant DAGs (transitive reductions).
 *
 * Nodes go into the layer given by their longest path from a source, so
 * every edge points strictly rightwards; a few barycenter sweeps reduce
 * crossings.  Everything is deterministic for a given input.
 */

import type { VariantDag, VariantNode } from "./api.js";

export interface PlacedNode {
  id: string;
  label: string;
  layer: number;
  x: number;
  y: number;
}

export interface PlacedEdge {
  from: string;
  to: string;
}

export interface Layout {
  nodes: PlacedNode[];
  edges: PlacedEdge[];
  width: number;
  height: number;
}

export const X_SPACING = 110;
export const Y_SPACING = 46;
const MARGIN = 40;

export function assignLayers(
  nodes: VariantNode[],
  edges: [string, string][],
): Map<string, number> {
  const incoming = new Map<string, number>(nodes.map((n) => [n.id, 0]));
  const successors = new Map<string, string[]>(nodes.map((n) => [n.id, []]));
  for (const [from, to] of edges) {
    successors.get(from)?.push(to);
    incoming.set(to, (incoming.get(to) ?? 0) + 1);
  }
  const layer = new Map<string, number>(nodes.map((n) => [n.id, 0]));
  const queue = nodes.filter((n) => (incoming.get(n.id) ?? 0) === 0).map((n) => n.id);
  const pending = new Map(incoming);
  while (queue.length > 0) {
    const id = queue.shift()!;
    for (const next of successors.get(id) ?? []) {
      layer.set(next, Math.max(layer.get(next) ?? 0, (layer.get(id) ?? 0) + 1));
      const left = (pending.get(next) ?? 0) - 1;
      pending.set(next, left);
      if (left === 0) {
        queue.push(next);
      }
    }
  }
  return layer;
}

function orderWithinLayers(
  nodes: VariantNode[],
  edges: [string, string][],
  layer: Map<string, number>,
): Map<string, number> {
  const byLayer = new Map<number, string[]>();
  const label = new Map(nodes.map((n) => [n.id, n.label]));
  for (const n of nodes) {
    const l = layer.get(n.id) ?? 0;
    if (!byLayer.has(l)) {
      byLayer.set(l, []);
    }
    byLayer.get(l)!.push(n.id);
  }
  for (const ids of byLayer.values()) {
    ids.sort((a, b) =>
      (label.get(a)! + a).localeCompare(label.get(b)! + b, "en"),
    );
  }
  const predecessors = new Map<string, string[]>(nodes.map((n) => [n.id, []]));
  for (const [from, to] of edges) {
    predecessors.get(to)?.push(from);
  }
  const position = new Map<string, number>();
  const layers = [...byLayer.keys()].sort((a, b) => a - b);
  for (let sweep = 0; sweep < 3; sweep++) {
    for (const l of layers) {
      const ids = byLayer.get(l)!;
      ids.forEach((id, i) => position.set(id, i));
      if (l === layers[0]) {
        continue;
      }
      const bary = (id: string): number => {
        const preds = predecessors.get(id) ?? [];
        if (preds.length === 0) {
          return position.get(id) ?? 0;
        }
        return preds.reduce((acc, p) => acc + (position.get(p) ?? 0), 0) / preds.length;
      };
      ids.sort((a, b) => bary(a) - bary(b) || a.localeCompare(b, "en"));
      ids.forEach((id, i) => position.set(id, i));
    }
  }
  for (const l of layers) {
    byLayer.get(l)!.forEach((id, i) => position.set(id, i));
  }
  return position;
}

export function layoutVariant(dag: VariantDag): Layout {
  const layer = assignLayers(dag.nodes, dag.edges);
  const position = orderWithinLayers(dag.nodes, dag.edges, layer);
  const layerSizes = new Map<number, number>();
  for (const n of dag.nodes) {
    const l = layer.get(n.id)!;
    layerSizes.set(l, (layerSizes.get(l) ?? 0) + 1);
  }
  const tallest = Math.max(1, ...layerSizes.values());
  const nodes: PlacedNode[] = dag.nodes.map((n) => {
    const l = layer.get(n.id)!;
    const count = layerSizes.get(l)!;
    const index = position.get(n.id)!;
    const offset = ((tallest - count) * Y_SPACING) / 2;
    return {
      id: n.id,
      label: n.label,
      layer: l,
      x: MARGIN + l * X_SPACING,
      y: MARGIN + offset + index * Y_SPACING,
    };
  });
  const maxLayer = Math.max(0, ...layer.values());
  return {
    nodes,
    edges: dag.edges.map(([from, to]) => ({ from, to })),
    width: 2 * MARGIN + maxLayer * X_SPACING + 60,
    height: 2 * MARGIN + (tallest - 1) * Y_SPACING + 20,
  };
}
