/**
 * DOM wiring for the explorer: the only module that touches the document.
 * State transitions live in state.ts, rendering in graph.ts, server access
 * in api.ts; this file routes events between them.
 */

import { ApiClient, ModelErrors } from './api.js';
import { renderScenario } from './graph.js';
import * as S from './state.js';
import { isExhausted } from './types.js';

const api = new ApiClient('');
let state: S.ViewState = S.initialState;

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
};

function setState(next: S.ViewState): void {
  state = next;
  render();
}

async function loadModel(): Promise<void> {
  const text = ($('model-text') as HTMLTextAreaElement).value;
  const errors = $('model-errors');
  errors.textContent = '';
  try {
    const summary = await api.loadModel(text);
    setState(S.modelLoaded(state, summary));
  } catch (err) {
    if (err instanceof ModelErrors) {
      errors.textContent = err.diagnostics
        .map((d) => `line ${d.line}, col ${d.col}: ${d.message}`)
        .join('\n');
    } else {
      errors.textContent = String(err);
    }
  }
}

async function openSize(size: number): Promise<void> {
  if (!state.model || !state.command) {
    return;
  }
  const existing = state.tabs.find((t) => t.size === size);
  if (existing) {
    setState(S.tabFocused(state, existing.sessionId));
    return;
  }
  const session = await api.openSession(state.model.modelId, state.command, size);
  setState(S.sessionOpened(state, session));
}

async function pressNext(): Promise<void> {
  const tab = S.activeTab(state);
  if (!tab) {
    return;
  }
  if (!S.atHead(tab) && tab.history.length > 0) {
    setState(S.historyForward(state, tab.sessionId));
    return;
  }
  if (!S.needsServerNext(tab)) {
    return;
  }
  setState(S.requestStarted(state, tab.sessionId));
  const reply = await api.next(tab.sessionId);
  if (isExhausted(reply)) {
    setState(S.sessionExhausted(state, tab.sessionId, reply.counts ?? {}));
  } else {
    setState(S.scenarioArrived(state, tab.sessionId, reply));
  }
}

function pressBack(): void {
  const tab = S.activeTab(state);
  if (tab) {
    setState(S.historyBack(state, tab.sessionId));
  }
}

async function deepen(): Promise<void> {
  if (!state.model || !state.command) {
    return;
  }
  const input = $('deepen-scope') as HTMLInputElement;
  const newScope = Number(input.value);
  if (!Number.isInteger(newScope) || newScope < 1) {
    return;
  }
  const created = await api.deepen(state.model.modelId, state.command, newScope);
  let next = S.scopeDeepened(state, newScope);
  for (const session of created) {
    next = S.sessionOpened(next, session);
  }
  setState(next);
}

function render(): void {
  renderModelPanel();
  renderTabs();
  renderViewer();
}

function renderModelPanel(): void {
  const panel = $('size-panel');
  panel.innerHTML = '';
  if (!state.model || !state.command) {
    panel.textContent = 'load a model to begin';
    return;
  }
  const heading = document.createElement('div');
  heading.className = 'command-name';
  heading.textContent = `run ${state.command}`;
  panel.appendChild(heading);
  for (const size of state.sizes) {
    const entry = document.createElement('button');
    entry.className = 'size-entry';
    entry.dataset.size = String(size);
    const tab = S.tabForSize(state, size);
    entry.textContent = tab
      ? `size ${size} — ${tab.history.length}${tab.exhausted ? ', done' : '…'}`
      : `size ${size}`;
    entry.addEventListener('click', () => void openSize(size));
    panel.appendChild(entry);
  }
}

function renderTabs(): void {
  const bar = $('tab-bar');
  bar.innerHTML = '';
  for (const tab of state.tabs) {
    const button = document.createElement('button');
    button.className = 'tab' + (tab.sessionId === state.activeSessionId ? ' active' : '');
    button.textContent = `size ${tab.size}`;
    button.addEventListener('click', () => setState(S.tabFocused(state, tab.sessionId)));
    bar.appendChild(button);
  }
}

function renderViewer(): void {
  const viewer = $('viewer');
  const caption = $('caption');
  const next = $('next') as HTMLButtonElement;
  const back = $('back') as HTMLButtonElement;
  const tab = S.activeTab(state);
  if (!tab || !state.model) {
    viewer.innerHTML = '';
    caption.textContent = '';
    next.disabled = back.disabled = true;
    return;
  }
  const scenario = S.currentScenario(tab);
  back.disabled = tab.cursor <= 0;
  next.disabled = tab.exhausted && S.atHead(tab);
  if (!scenario) {
    viewer.innerHTML = '';
    caption.textContent = tab.exhausted
      ? `no scenarios of size ${tab.size}`
      : 'press next for the first scenario';
    return;
  }
  viewer.innerHTML = renderScenario(state.model, scenario);
  const transition =
    S.isPhaseTransition(tab, tab.cursor) && scenario.phase !== null
      ? ` — entering ${scenario.phase} phase`
      : '';
  const phase = scenario.phase === null ? '' : ` · phase ${scenario.phase}`;
  caption.textContent = `scenario ${scenario.ordinal + 1} · size ${scenario.size}${phase}${transition}`;
  if (tab.exhausted && S.atHead(tab)) {
    const totals = Object.entries(S.phaseTotals(tab))
      .map(([name, n]) => `${name}: ${n}`)
      .join(', ');
    caption.textContent += ` · exhausted (${totals || tab.history.length})`;
  }
}

function init(): void {
  $('load-model').addEventListener('click', () => void loadModel());
  $('next').addEventListener('click', () => void pressNext());
  $('back').addEventListener('click', pressBack);
  $('deepen').addEventListener('click', () => void deepen());
  render();
}

init();
