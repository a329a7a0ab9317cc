// Pure view builders: service responses in, view models / HTML strings out.
// No score arithmetic happens here; scores, ranks, tie groups and colors are
// lifted verbatim from the response (formatting only), and row order is the
// response order.

import { cssColor, textColorOn } from "./colors.js";
import type {
  ColorMode,
  ExplanationResponse,
  RankingEntry,
  RankingResponse,
} from "./types.js";

export interface RankedRow {
  element: number;
  rankText: string;
  scoreText: string;
  name: string;
  location: string;
  tieGroup: number;
  color: string;
  textColor: string;
  selected: boolean;
}

export function escapeHtml(value: unknown): string {
  return String(value ?? "")
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function location(entry: { path: string; start_line: number; end_line: number }): string {
  if (!entry.path) return "-";
  return entry.start_line === entry.end_line
    ? `${entry.path}:${entry.start_line}`
    : `${entry.path}:${entry.start_line}-${entry.end_line}`;
}

export function formatScore(score: number): string {
  return score.toFixed(4);
}

export function formatRank(rank: number): string {
  return Number.isInteger(rank) ? String(rank) : rank.toFixed(1);
}

export function buildRows(
  snapshot: RankingResponse,
  mode: ColorMode,
  selected: number | null = null,
): RankedRow[] {
  return snapshot.entries.map((entry) => ({
    element: entry.element,
    rankText: formatRank(entry.rank),
    scoreText: formatScore(entry.score),
    name: entry.name,
    location: location(entry),
    tieGroup: entry.tie_group,
    color: cssColor(entry.color, mode),
    textColor: textColorOn(entry.color, mode),
    selected: entry.element === selected,
  }));
}

export function renderRankingHtml(rows: RankedRow[]): string {
  const body = rows
    .map(
      (row) => `
  <tr class="entry${row.selected ? " selected" : ""}" data-element="${row.element}">
    <td class="rank">${escapeHtml(row.rankText)}</td>
    <td class="score"><span class="chip" style="background:${row.color};color:${row.textColor}">${escapeHtml(row.scoreText)}</span></td>
    <td class="name">${escapeHtml(row.name)}</td>
    <td class="loc">${escapeHtml(row.location)}</td>
  </tr>`,
    )
    .join("");
  return `<table class="ranking">
  <thead><tr><th>rank</th><th>score</th><th>element</th><th>location</th></tr></thead>
  <tbody>${body}
  </tbody>
</table>`;
}

// -- hierarchy ----------------------------------------------------------------

export interface TreeNode {
  element: number;
  name: string;
  kind: string;
  scoreText: string;
  color: string;
  textColor: string;
  children: TreeNode[];
}

// Coarsest-kind roots first; children keep each response's own order, so every
// subtree is ordered exactly as the service ranked that granularity.  Parent
// chains can only be followed through fetched elements: an entry whose parent
// was not part of any snapshot becomes a root (the spectrum may legitimately
// skip levels, e.g. statements parented straight to files).
export function buildTree(
  snapshots: Record<string, RankingResponse>,
  mode: ColorMode,
): TreeNode[] {
  const nodes = new Map<number, TreeNode>();
  const parents = new Map<number, number | null>();
  const order: RankingEntry[] = [];
  const kindRank: Record<string, number> = {
    PACKAGE: 0,
    FILE: 1,
    CLASS: 2,
    METHOD: 3,
    STATEMENT: 4,
  };
  const kinds = Object.keys(snapshots).sort((a, b) => kindRank[a] - kindRank[b]);
  for (const kind of kinds) {
    for (const entry of snapshots[kind].entries) {
      nodes.set(entry.element, {
        element: entry.element,
        name: entry.name,
        kind: entry.kind,
        scoreText: formatScore(entry.score),
        color: cssColor(entry.color, mode),
        textColor: textColorOn(entry.color, mode),
        children: [],
      });
      parents.set(entry.element, entry.parent);
      order.push(entry);
    }
  }
  const roots: TreeNode[] = [];
  for (const entry of order) {
    const node = nodes.get(entry.element)!;
    let ancestor = parents.get(entry.element) ?? null;
    // the immediate parent may be a granularity we did not fetch; walk up
    while (ancestor !== null && !nodes.has(ancestor)) {
      ancestor = parents.get(ancestor) ?? null;
    }
    if (ancestor === null) {
      roots.push(node);
    } else {
      nodes.get(ancestor)!.children.push(node);
    }
  }
  return roots;
}

export function renderTreeHtml(roots: TreeNode[]): string {
  const renderNode = (node: TreeNode): string => {
    const label = `<span class="chip" style="background:${node.color};color:${node.textColor}">${escapeHtml(node.scoreText)}</span>
      <span class="tree-kind">${escapeHtml(node.kind.toLowerCase())}</span>
      <span class="tree-name" data-element="${node.element}">${escapeHtml(node.name)}</span>`;
    if (node.children.length === 0) {
      return `<li class="leaf">${label}</li>`;
    }
    const children = node.children.map(renderNode).join("");
    return `<li><details open><summary>${label}</summary><ul>${children}</ul></details></li>`;
  };
  return `<ul class="tree">${roots.map(renderNode).join("")}</ul>`;
}

// -- explanation ----------------------------------------------------------------

export function renderExplanationHtml(exp: ExplanationResponse): string {
  const failing = exp.failing_tests.length
    ? exp.failing_tests.map((t) => `<li>${escapeHtml(t.name)} (id ${t.id})</li>`).join("")
    : "<li>none</li>";
  const m = exp.metrics;
  return `<div class="explanation">
  <h3>${escapeHtml(exp.name)} <small>${escapeHtml(location(exp))}</small></h3>
  <p class="formula"><code>${escapeHtml(exp.formula)}</code></p>
  <p class="trace">= <code>${escapeHtml(exp.trace)}</code> = <strong>${escapeHtml(formatScore(exp.score))}</strong></p>
  <p class="metrics">ef=${m.ef} ep=${m.ep} nf=${m.nf} np=${m.np}</p>
  <p>covering failing tests:</p>
  <ul class="failing">${failing}</ul>
  <p>covering passing tests: ${exp.passing_covering}</p>
</div>`;
}

export function renderWarnings(snapshot: RankingResponse): string {
  const warnings: string[] = [];
  if (snapshot.no_failing_tests) {
    warnings.push("no failing tests: every score is 0");
  }
  if (snapshot.concluded) {
    warnings.push("session concluded: fault marked as found");
  }
  if (snapshot.skipped_actions?.length) {
    warnings.push(`${snapshot.skipped_actions.length} feedback action(s) skipped after reanalysis`);
  }
  return warnings.map((w) => `<div class="warning">${escapeHtml(w)}</div>`).join("");
}
