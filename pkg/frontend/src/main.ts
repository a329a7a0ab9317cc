// DOM bootstrap: the only module that touches document/window. All data
// shown comes from service responses via the pure builders in render.ts.

import { ApiClient, ServiceError } from "./api.js";
import {
  buildRows,
  buildTree,
  renderExplanationHtml,
  renderRankingHtml,
  renderTreeHtml,
  renderWarnings,
} from "./render.js";
import { applySnapshot, buildFragment, initialState, parseFragment } from "./state.js";
import type { RankingResponse, Verdict } from "./types.js";

const api = new ApiClient("");
let state = initialState();

const $ = (id: string) => document.getElementById(id)!;

function setStatus(message: string, isError = false) {
  const el = $("status");
  el.textContent = message;
  el.className = isError ? "status error" : "status";
}

function syncFragment() {
  history.replaceState(null, "", buildFragment(state) || "#");
}

async function refreshTree() {
  const snapshot = state.snapshot;
  if (!snapshot) return;
  const kinds = snapshot.available_granularities;
  const responses: Record<string, RankingResponse> = {};
  for (const kind of kinds) {
    responses[kind] =
      kind === snapshot.session_granularity && state.granularity === null
        ? snapshot
        : await api.getRanking(snapshot.session_id, { granularity: kind });
  }
  $("tree").innerHTML = renderTreeHtml(buildTree(responses, state.colorMode));
}

function renderList() {
  const snapshot = state.snapshot;
  if (!snapshot) return;
  $("warnings").innerHTML = renderWarnings(snapshot);
  $("ranking").innerHTML = renderRankingHtml(
    buildRows(snapshot, state.colorMode, state.selected),
  );
  $("meta").textContent =
    `session ${snapshot.session_id} | formula ${snapshot.formula} | ` +
    `${snapshot.granularity.toLowerCase()} level | ${snapshot.total_entries} elements`;
  for (const row of document.querySelectorAll<HTMLTableRowElement>("tr.entry")) {
    row.onclick = () => selectElement(Number(row.dataset.element));
  }
  const options = snapshot.available_granularities
    .map((k) => `<option value="${k}"${k === (state.granularity ?? snapshot.session_granularity) ? " selected" : ""}>${k.toLowerCase()}</option>`)
    .join("");
  $("granularity").innerHTML = options;
}

async function selectElement(element: number) {
  state = { ...state, selected: element };
  syncFragment();
  renderList();
  try {
    const exp = await api.getExplanation(state.sessionId!, element);
    $("explanation").innerHTML = renderExplanationHtml(exp);
  } catch (err) {
    setStatus(err instanceof ServiceError ? err.message : String(err), true);
  }
}

async function loadRanking() {
  if (!state.sessionId) return;
  const snapshot = await api.getRanking(state.sessionId, {
    granularity: state.granularity ?? undefined,
  });
  state = applySnapshot(state, snapshot);
  syncFragment();
  renderList();
  await refreshTree();
}

async function submitVerdict(verdict: Verdict) {
  if (!state.sessionId || state.selected === null) {
    setStatus("select an element first", true);
    return;
  }
  try {
    const snapshot = await api.postFeedback(state.sessionId, state.selected, verdict);
    // feedback responses are at session granularity; refetch if a coarser
    // view is active so the list reflects the adjusted scores
    if (state.granularity !== null) {
      await loadRanking();
    } else {
      state = applySnapshot(state, snapshot);
      renderList();
      await refreshTree();
    }
    setStatus(`recorded ${verdict} for element ${state.selected ?? ""}`);
  } catch (err) {
    setStatus(err instanceof ServiceError ? err.message : String(err), true);
  }
}

async function boot() {
  const fragment = parseFragment(location.hash);
  state = { ...state, sessionId: fragment.sessionId, selected: fragment.element };

  $("load").onclick = async () => {
    state = { ...state, sessionId: ($("session-input") as HTMLInputElement).value.trim() || null, granularity: null };
    try {
      await loadRanking();
      setStatus("loaded");
    } catch (err) {
      setStatus(err instanceof ServiceError ? err.message : String(err), true);
    }
  };
  $("granularity").onchange = async () => {
    const value = ($("granularity") as HTMLSelectElement).value;
    state = {
      ...state,
      granularity: value === state.snapshot?.session_granularity ? null : value,
    };
    await loadRanking();
  };
  ($("high-contrast") as HTMLInputElement).onchange = async () => {
    state = {
      ...state,
      colorMode: ($("high-contrast") as HTMLInputElement).checked
        ? "HIGH_CONTRAST"
        : "STANDARD",
    };
    renderList();
    await refreshTree();
  };
  $("verdict-not-faulty").onclick = () => submitVerdict("NOT_FAULTY");
  $("verdict-suspicious").onclick = () => submitVerdict("SUSPICIOUS_CONTEXT");
  $("verdict-found").onclick = () => submitVerdict("FAULT_FOUND");
  $("export").onclick = async () => {
    if (!state.sessionId) return;
    const doc = await api.exportSession(state.sessionId);
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `session-${state.sessionId}.json`;
    a.click();
    URL.revokeObjectURL(a.href);
  };

  if (state.sessionId) {
    ($("session-input") as HTMLInputElement).value = state.sessionId;
    try {
      await loadRanking();
      if (state.selected !== null) await selectElement(state.selected);
    } catch (err) {
      setStatus(err instanceof ServiceError ? err.message : String(err), true);
    }
  }
}

boot();
