/** SVG rendering as pure string construction, so it is testable headlessly.
 *
 * Visual conventions: truth values colour the per-state formula tree green
 * (tt), red (ff) or grey (undefined); evidence states are tinted blue and
 * everything else greys out while a selection is active; open states are
 * dotted, closed states solid.
 */

import { AstNode, Bundle } from "./bundle.js";
import { Highlight, ViewState, edgeKey } from "./core.js";
import { Point } from "./layout.js";

export const COLOURS = {
  tt: "#b7e8b0",
  ff: "#f4b6b6",
  undefined: "#d9d9d9",
  highlight: "#cfe5f7",
  dimmed: "#efefef",
  edge: "#444444",
  edgeDim: "#c0c0c0",
  edgeHighlight: "#1668b0",
};

const ROW_HEIGHT = 16;
const WIDTH = 180;

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface AstRow {
  node: AstNode;
  depth: number;
}

/** Root first; children stacked bottom-to-top beneath their parent. */
export function astRows(bundle: Bundle, rootId: string): AstRow[] {
  const rows: AstRow[] = [];
  const walk = (id: string, depth: number) => {
    const node = bundle.nodes[id];
    rows.push({ node, depth });
    for (const child of [...node.children].reverse()) {
      walk(child, depth + 1);
    }
  };
  walk(rootId, 0);
  return rows;
}

/** The rows shown in every state: the formula as written and, when
 * desugaring changed it, the core form beneath (its temporal operators
 * carry the evidence blocks). */
export function displayRows(bundle: Bundle): AstRow[] {
  const rows = astRows(bundle, bundle.root);
  const core = bundle.nodes[bundle.root].core;
  if (core !== bundle.root) {
    rows.push(...astRows(bundle, core));
  }
  return rows;
}

function glyph(node: AstNode): string {
  switch (node.op) {
    case "prop": return node.name;
    case "true": return "true";
    case "false": return "false";
    case "not": return "!";
    case "and": return "&&";
    case "or": return "||";
    case "EU": return "E[ U ]";
    case "AU": return "A[ U ]";
    default: return node.op;
  }
}

function labelValue(view: ViewState, highlight: Highlight | null,
                    state: string, text: string): boolean | undefined {
  if (highlight) {
    return highlight.labels.get(state)?.get(text);
  }
  return view.bundle.model.labels[text]?.[state];
}

function stateSvg(view: ViewState, highlight: Highlight | null,
                  rows: AstRow[], id: string, closed: boolean,
                  pos: Point): string {
  const inHighlight = highlight !== null && highlight.states.has(id);
  const dimmed = highlight !== null && !inHighlight;
  const effectiveClosed = inHighlight ? highlight!.closed.has(id) : closed;
  const height = ROW_HEIGHT * (rows.length + 1) + 8;
  const parts: string[] = [];
  const border = view.selectedState === id ? 2.5 : 1.2;
  const fill = inHighlight ? COLOURS.highlight : dimmed ? COLOURS.dimmed : "#ffffff";
  const dash = effectiveClosed ? "" : ' stroke-dasharray="4 3"';
  parts.push(
    `<g class="state" data-state="${escapeXml(id)}" transform="translate(${pos.x},${pos.y})">`);
  parts.push(
    `<rect class="state-box" width="${WIDTH}" height="${height}" rx="6" fill="${fill}"`
    + ` stroke="#333" stroke-width="${border}"${dash}/>`);
  parts.push(
    `<text x="8" y="${ROW_HEIGHT - 2}" font-weight="bold" font-size="12">${escapeXml(id)}</text>`);
  rows.forEach((row, index) => {
    const y = ROW_HEIGHT * (index + 1) + 4;
    const value = dimmed ? undefined
      : labelValue(view, highlight, id, row.node.text);
    const colour = value === true ? COLOURS.tt
      : value === false ? COLOURS.ff : COLOURS.undefined;
    const x = 6 + row.depth * 12;
    parts.push(
      `<g class="ast-row" data-state="${escapeXml(id)}" data-node="${row.node.id}">`
      + `<rect x="${x}" y="${y}" width="${WIDTH - x - 6}" height="${ROW_HEIGHT - 2}"`
      + ` fill="${colour}" opacity="${dimmed ? 0.45 : 1}"/>`
      + `<text x="${x + 4}" y="${y + ROW_HEIGHT - 5}" font-size="11" font-family="monospace">`
      + `${escapeXml(glyph(row.node))}</text></g>`);
  });
  parts.push("</g>");
  return parts.join("");
}

function edgeSvg(highlight: Highlight | null, a: string, b: string,
                 from: Point, to: Point, rowsHeight: number): string {
  const key = edgeKey(a, b);
  const inHighlight = highlight !== null && highlight.transitions.has(key);
  const colour = inHighlight ? COLOURS.edgeHighlight
    : highlight !== null ? COLOURS.edgeDim : COLOURS.edge;
  const width = inHighlight ? 2.4 : 1.4;
  const x1 = from.x + WIDTH / 2;
  const y1 = from.y + rowsHeight / 2;
  const x2 = to.x + WIDTH / 2;
  const y2 = to.y + rowsHeight / 2;
  if (a === b) {
    const r = 24;
    return `<path class="edge" data-edge="${escapeXml(key)}" d="M ${x1 + WIDTH / 2 - 10} ${y1 - 10}`
      + ` a ${r} ${r} 0 1 1 0 20" fill="none" stroke="${colour}"`
      + ` stroke-width="${width}" marker-end="url(#arrow)"/>`;
  }
  return `<path class="edge" data-edge="${escapeXml(key)}" d="M ${x1} ${y1} L ${x2} ${y2}"`
    + ` fill="none" stroke="${colour}" stroke-width="${width}" marker-end="url(#arrow)"/>`;
}

export function renderSvg(view: ViewState, highlight: Highlight | null): string {
  const { bundle } = view;
  const rows = displayRows(bundle);
  const rowsHeight = ROW_HEIGHT * (rows.length + 1) + 8;
  let maxX = 400;
  let maxY = 300;
  for (const p of view.positions.values()) {
    maxX = Math.max(maxX, p.x + WIDTH + 60);
    maxY = Math.max(maxY, p.y + rowsHeight + 60);
  }
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${maxX}" height="${maxY}"`
    + ` viewBox="0 0 ${maxX} ${maxY}" font-family="sans-serif">`);
  parts.push(
    '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5"'
    + ' markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
    + '<path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker></defs>');
  for (const [a, b] of [...bundle.model.transitions].sort()) {
    const from = view.positions.get(a);
    const to = view.positions.get(b);
    if (from && to) {
      parts.push(edgeSvg(highlight, a, b, from, to, rowsHeight));
    }
  }
  for (const state of [...bundle.model.states].sort((s, t) => s.id < t.id ? -1 : 1)) {
    const pos = view.positions.get(state.id) ?? { x: 40, y: 40 };
    parts.push(stateSvg(view, highlight, rows, state.id, state.closed, pos));
  }
  parts.push("</svg>");
  return parts.join("\n");
}
