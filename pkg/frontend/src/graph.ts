/**
 * Scenario rendering: atoms as colored nodes (one color per top-level
 * signature), field tuples as labeled directed edges, and an explicit
 * empty-set indicator for the size-0 scenario.  Produces SVG markup so the
 * renderer is testable without a DOM.
 */

import { layoutScenario } from './layout.js';
import type { ModelSummary, ScenarioDoc } from './types.js';

const PALETTE = ['#e8a33d', '#5b9bd5', '#70ad47', '#c55a5a', '#9b7fd4', '#4dbdbd'];

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Top-level signature each atom belongs to, in declaration order. */
export function atomOwners(model: ModelSummary, doc: ScenarioDoc): Map<string, string> {
  const owners = new Map<string, string>();
  const topLevel = model.sigs.filter((s) => s.parent === null);
  for (const sig of topLevel) {
    for (const atom of doc.sigs[sig.name] ?? []) {
      if (!owners.has(atom)) {
        owners.set(atom, sig.name);
      }
    }
  }
  return owners;
}

export function sigColor(model: ModelSummary, sigName: string): string {
  const topLevel = model.sigs.filter((s) => s.parent === null);
  const idx = topLevel.findIndex((s) => s.name === sigName);
  return PALETTE[(idx < 0 ? 0 : idx) % PALETTE.length];
}

export function renderScenario(model: ModelSummary, doc: ScenarioDoc): string {
  const owners = atomOwners(model, doc);
  const atoms = [...owners.keys()];
  if (atoms.length === 0) {
    return [
      '<svg class="scenario-graph" viewBox="0 0 420 300" xmlns="http://www.w3.org/2000/svg">',
      '<text class="empty-marker" x="210" y="150" text-anchor="middle" font-size="64">∅</text>',
      '<text x="210" y="200" text-anchor="middle" font-size="13">empty scenario</text>',
      '</svg>',
    ].join('');
  }
  const layout = layoutScenario(doc, atoms);
  const pos = new Map(layout.nodes.map((n) => [n.id, n]));
  const parts: string[] = [
    `<svg class="scenario-graph" viewBox="0 0 ${layout.width} ${layout.height}" xmlns="http://www.w3.org/2000/svg">`,
    '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">',
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#555"/></marker></defs>',
  ];
  for (const edge of layout.edges) {
    const a = pos.get(edge.source);
    const b = pos.get(edge.target);
    if (!a || !b) {
      continue;
    }
    if (edge.source === edge.target) {
      parts.push(
        `<path class="edge" d="M ${a.x + 14} ${a.y} C ${a.x + 46} ${a.y - 26}, ${a.x + 46} ${a.y + 26}, ${a.x + 15} ${a.y + 7}" fill="none" stroke="#555" marker-end="url(#arrow)"/>`,
        `<text class="edge-label" x="${a.x + 50}" y="${a.y + 4}" font-size="11">${esc(edge.label)}</text>`,
      );
      continue;
    }
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.max(Math.hypot(dx, dy), 1);
    const sx = a.x + (dx / d) * 16;
    const sy = a.y + (dy / d) * 16;
    const tx = b.x - (dx / d) * 18;
    const ty = b.y - (dy / d) * 18;
    parts.push(
      `<line class="edge" x1="${sx.toFixed(1)}" y1="${sy.toFixed(1)}" x2="${tx.toFixed(1)}" y2="${ty.toFixed(1)}" stroke="#555" marker-end="url(#arrow)"/>`,
      `<text class="edge-label" x="${((sx + tx) / 2 + 6).toFixed(1)}" y="${((sy + ty) / 2 - 4).toFixed(1)}" font-size="11">${esc(edge.label)}</text>`,
    );
  }
  for (const node of layout.nodes) {
    const owner = owners.get(node.id) ?? '';
    parts.push(
      `<g class="atom" data-sig="${esc(owner)}">`,
      `<rect x="${(node.x - 16).toFixed(1)}" y="${(node.y - 13).toFixed(1)}" width="32" height="26" rx="4" fill="${sigColor(model, owner)}" stroke="#333"/>`,
      `<text x="${node.x.toFixed(1)}" y="${(node.y + 4).toFixed(1)}" text-anchor="middle" font-size="12" font-weight="bold">${esc(node.id)}</text>`,
      '</g>',
    );
  }
  parts.push('</svg>');
  return parts.join('');
}
