// View state plus the permanent-link fragment: #session=<id>&element=<id>
// deep-links a session and an optional selected element.

import type { ColorMode, RankingResponse } from "./types.js";

export interface ViewState {
  sessionId: string | null;
  granularity: string | null; // null = session granularity
  selected: number | null;
  snapshot: RankingResponse | null;
  colorMode: ColorMode;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    granularity: null,
    selected: null,
    snapshot: null,
    colorMode: "STANDARD",
  };
}

export function applySnapshot(state: ViewState, snapshot: RankingResponse): ViewState {
  const stillThere =
    state.selected !== null &&
    snapshot.entries.some((e) => e.element === state.selected);
  return {
    ...state,
    sessionId: snapshot.session_id,
    snapshot,
    selected: stillThere ? state.selected : null,
  };
}

export function parseFragment(fragment: string): { sessionId: string | null; element: number | null } {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const element = params.get("element");
  return {
    sessionId: params.get("session"),
    element: element !== null && /^\d+$/.test(element) ? Number(element) : null,
  };
}

export function buildFragment(state: ViewState): string {
  if (state.sessionId === null) return "";
  const params = new URLSearchParams();
  params.set("session", state.sessionId);
  if (state.selected !== null) params.set("element", String(state.selected));
  return `#${params.toString()}`;
}
