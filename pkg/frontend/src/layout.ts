/**
 * Deterministic force-directed layout: node positions are seeded from a hash
 * of the scenario document, so the same scenario always renders identically.
 */

import type { ScenarioDoc } from './types.js';

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
}

export interface LayoutEdge {
  source: string;
  target: string;
  label: string;
}

export function scenarioHash(doc: ScenarioDoc): number {
  const text = JSON.stringify([doc.sigs, doc.fields]);
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i += 1) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface Layout {
  nodes: LayoutNode[];
  edges: LayoutEdge[];
  width: number;
  height: number;
}

const WIDTH = 420;
const HEIGHT = 300;
const ITERATIONS = 120;

export function layoutScenario(doc: ScenarioDoc, atomIds: string[]): Layout {
  const rand = mulberry32(scenarioHash(doc));
  const nodes: LayoutNode[] = atomIds.map((id) => ({
    id,
    x: WIDTH * (0.15 + 0.7 * rand()),
    y: HEIGHT * (0.15 + 0.7 * rand()),
  }));
  const edges: LayoutEdge[] = [];
  for (const [name, tuples] of Object.entries(doc.fields)) {
    for (const [a, b] of tuples) {
      edges.push({ source: a, target: b, label: name });
    }
  }
  const index = new Map(nodes.map((n, i) => [n.id, i]));

  for (let step = 0; step < ITERATIONS; step += 1) {
    const fx = nodes.map(() => 0);
    const fy = nodes.map(() => 0);
    for (let i = 0; i < nodes.length; i += 1) {
      for (let j = i + 1; j < nodes.length; j += 1) {
        const dx = nodes[i].x - nodes[j].x;
        const dy = nodes[i].y - nodes[j].y;
        const d2 = Math.max(dx * dx + dy * dy, 25);
        const push = 2800 / d2;
        const d = Math.sqrt(d2);
        fx[i] += (dx / d) * push;
        fy[i] += (dy / d) * push;
        fx[j] -= (dx / d) * push;
        fy[j] -= (dy / d) * push;
      }
    }
    for (const edge of edges) {
      const i = index.get(edge.source);
      const j = index.get(edge.target);
      if (i === undefined || j === undefined || i === j) {
        continue;
      }
      const dx = nodes[j].x - nodes[i].x;
      const dy = nodes[j].y - nodes[i].y;
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = (d - 90) * 0.04;
      fx[i] += (dx / d) * pull;
      fy[i] += (dy / d) * pull;
      fx[j] -= (dx / d) * pull;
      fy[j] -= (dy / d) * pull;
    }
    const cool = 1 - step / ITERATIONS;
    for (let i = 0; i < nodes.length; i += 1) {
      nodes[i].x += Math.max(-8, Math.min(8, fx[i])) * cool;
      nodes[i].y += Math.max(-8, Math.min(8, fy[i])) * cool;
      nodes[i].x += (WIDTH / 2 - nodes[i].x) * 0.01;
      nodes[i].y += (HEIGHT / 2 - nodes[i].y) * 0.01;
      nodes[i].x = Math.max(30, Math.min(WIDTH - 30, nodes[i].x));
      nodes[i].y = Math.max(24, Math.min(HEIGHT - 24, nodes[i].y));
    }
  }
  return { nodes, edges, width: WIDTH, height: HEIGHT };
}
