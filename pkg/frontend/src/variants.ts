/**
 * Variant explorer: matched variants as expandable rows, each drawing its
 * representative reduction as a left-to-right SVG DAG.
 */

import type { QueryResponse, VariantDag } from "./api.js";
import { labelBackground, labelColor } from "./colors.js";
import { layoutVariant } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function drawVariant(dag: VariantDag): SVGSVGElement {
  const layout = layoutVariant(dag);
  const byId = new Map(layout.nodes.map((n) => [n.id, n]));
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(layout.width));
  svg.setAttribute("height", String(layout.height));
  svg.classList.add("variant-dag");

  for (const edge of layout.edges) {
    const from = byId.get(edge.from)!;
    const to = byId.get(edge.to)!;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x + 30));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x - 32));
    line.setAttribute("y2", String(to.y));
    line.setAttribute("class", "dag-edge");
    line.setAttribute("marker-end", "url(#dag-arrow)");
    svg.append(line);
  }

  const defs = document.createElementNS(SVG_NS, "defs");
  defs.innerHTML =
    '<marker id="dag-arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
    'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#667"/></marker>';
  svg.prepend(defs);

  for (const node of layout.nodes) {
    const group = document.createElementNS(SVG_NS, "g");
    const circle = document.createElementNS(SVG_NS, "ellipse");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("rx", "30");
    circle.setAttribute("ry", "16");
    circle.setAttribute("fill", labelBackground(node.label));
    circle.setAttribute("stroke", labelColor(node.label));
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(node.x));
    text.setAttribute("y", String(node.y + 4));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("fill", labelColor(node.label));
    text.textContent = node.label;
    group.append(circle, text);
    svg.append(group);
  }
  return svg;
}

export class VariantList {
  constructor(
    private readonly container: HTMLElement,
    private readonly onSelect: (key: string) => void,
  ) {}

  render(result: QueryResponse | null, selected: string | null): void {
    this.container.replaceChildren();
    if (result === null) {
      return;
    }
    for (const variant of result.matched_variants) {
      const row = document.createElement("div");
      row.className = "variant-row";
      const header = document.createElement("button");
      header.type = "button";
      header.className = "variant-header";
      header.textContent =
        `${variant.key.slice(0, 12)} · ${variant.count} trace` +
        `${variant.count === 1 ? "" : "s"} · ${variant.nodes.length} activities`;
      header.addEventListener("click", () => this.onSelect(variant.key));
      row.append(header);
      if (variant.key === selected) {
        row.classList.add("expanded");
        row.append(drawVariant(variant));
      }
      this.container.append(row);
    }
  }
}
