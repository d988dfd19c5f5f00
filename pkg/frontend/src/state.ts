/**
 * Explorer view state: one tab per live enumeration session, client-side
 * history per tab (the server only moves forward), and the deepen control.
 *
 * All transitions are pure functions over an immutable ViewState so the
 * store can be exercised headlessly; main.ts owns the DOM and the client.
 */

import type { ModelSummary, ScenarioDoc, SessionResource } from './types.js';

export interface TabState {
  sessionId: string;
  size: number;
  /** scenarios in server emission order; never reordered */
  history: ScenarioDoc[];
  /** index into history of the scenario on screen; -1 before the first */
  cursor: number;
  exhausted: boolean;
  /** phase totals reported by the server once exhausted */
  counts: Record<string, number>;
  pending: boolean;
}

export interface ViewState {
  model: ModelSummary | null;
  command: string | null;
  /** sizes offered in the per-command panel, 0..scope plus deepened ones */
  sizes: number[];
  tabs: TabState[];
  activeSessionId: string | null;
}

export const initialState: ViewState = {
  model: null,
  command: null,
  sizes: [],
  tabs: [],
  activeSessionId: null,
};

export function modelLoaded(state: ViewState, model: ModelSummary): ViewState {
  const command = model.commands.length ? model.commands[0].name : null;
  return {
    model,
    command,
    sizes: command === null ? [] : sizeRange(model, command),
    tabs: [],
    activeSessionId: null,
  };
}

export function commandSelected(state: ViewState, command: string): ViewState {
  if (state.model === null) {
    return state;
  }
  return { ...state, command, sizes: sizeRange(state.model, command) };
}

function sizeRange(model: ModelSummary, command: string): number[] {
  const found = model.commands.find((c) => c.name === command);
  if (!found) {
    return [];
  }
  return Array.from({ length: found.scope + 1 }, (_, i) => i);
}

export function tabForSize(state: ViewState, size: number): TabState | undefined {
  return state.tabs.find((t) => t.size === size);
}

export function activeTab(state: ViewState): TabState | undefined {
  return state.tabs.find((t) => t.sessionId === state.activeSessionId);
}

/** Open a tab for a freshly created session, or focus the size's tab. */
export function sessionOpened(state: ViewState, session: SessionResource): ViewState {
  const existing = state.tabs.find((t) => t.sessionId === session.id);
  if (existing) {
    return { ...state, activeSessionId: session.id };
  }
  const tab: TabState = {
    sessionId: session.id,
    size: session.size ?? 0,
    history: [],
    cursor: -1,
    exhausted: session.state === 'exhausted',
    counts: { ...session.counts },
    pending: false,
  };
  return { ...state, tabs: [...state.tabs, tab], activeSessionId: session.id };
}

export function tabFocused(state: ViewState, sessionId: string): ViewState {
  if (!state.tabs.some((t) => t.sessionId === sessionId)) {
    return state;
  }
  return { ...state, activeSessionId: sessionId };
}

export function tabClosed(state: ViewState, sessionId: string): ViewState {
  const tabs = state.tabs.filter((t) => t.sessionId !== sessionId);
  const activeSessionId =
    state.activeSessionId === sessionId
      ? tabs.length
        ? tabs[tabs.length - 1].sessionId
        : null
      : state.activeSessionId;
  return { ...state, tabs, activeSessionId };
}

function updateTab(
  state: ViewState,
  sessionId: string,
  update: (tab: TabState) => TabState,
): ViewState {
  return {
    ...state,
    tabs: state.tabs.map((t) => (t.sessionId === sessionId ? update(t) : t)),
  };
}

export function requestStarted(state: ViewState, sessionId: string): ViewState {
  return updateTab(state, sessionId, (t) => ({ ...t, pending: true }));
}

/** Append a scenario in emission order and move the cursor to it. */
export function scenarioArrived(
  state: ViewState,
  sessionId: string,
  scenario: ScenarioDoc,
): ViewState {
  return updateTab(state, sessionId, (t) => ({
    ...t,
    history: [...t.history, scenario],
    cursor: t.history.length,
    pending: false,
  }));
}

export function sessionExhausted(
  state: ViewState,
  sessionId: string,
  counts: Record<string, number> = {},
): ViewState {
  return updateTab(state, sessionId, (t) => ({
    ...t,
    exhausted: true,
    counts: Object.keys(counts).length ? counts : t.counts,
    pending: false,
  }));
}

/** Step back through the local history; no server involvement. */
export function historyBack(state: ViewState, sessionId: string): ViewState {
  return updateTab(state, sessionId, (t) => ({
    ...t,
    cursor: Math.max(t.cursor - 1, t.history.length ? 0 : -1),
  }));
}

/** Step forward within history; the controller calls /next only at the head. */
export function historyForward(state: ViewState, sessionId: string): ViewState {
  return updateTab(state, sessionId, (t) => ({
    ...t,
    cursor: Math.min(t.cursor + 1, t.history.length - 1),
  }));
}

export function atHead(tab: TabState): boolean {
  return tab.cursor === tab.history.length - 1;
}

/** True when pressing next must hit the server instead of the history. */
export function needsServerNext(tab: TabState): boolean {
  return (atHead(tab) || tab.history.length === 0) && !tab.exhausted && !tab.pending;
}

export function currentScenario(tab: TabState): ScenarioDoc | null {
  return tab.cursor >= 0 ? tab.history[tab.cursor] : null;
}

/** A phase boundary: this scenario's phase differs from its predecessor's. */
export function isPhaseTransition(tab: TabState, index: number): boolean {
  if (index <= 0 || index >= tab.history.length) {
    return index === 0 && tab.history.length > 0;
  }
  return tab.history[index].phase !== tab.history[index - 1].phase;
}

/** Deepening extends the size panel without touching existing tabs. */
export function scopeDeepened(state: ViewState, newScope: number): ViewState {
  const known = new Set(state.sizes);
  const sizes = [...state.sizes];
  for (let s = 0; s <= newScope; s += 1) {
    if (!known.has(s)) {
      sizes.push(s);
    }
  }
  sizes.sort((a, b) => a - b);
  return { ...state, sizes };
}

export function phaseTotals(tab: TabState): Record<string, number> {
  if (Object.keys(tab.counts).length) {
    return tab.counts;
  }
  const totals: Record<string, number> = {};
  for (const doc of tab.history) {
    if (doc.phase !== null) {
      totals[doc.phase] = (totals[doc.phase] ?? 0) + 1;
    }
  }
  return totals;
}
