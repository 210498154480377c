// Full ViewState lives in the URL hash so any view is a shareable link.

import type { SharedFilters } from "./api";

export type Tab = "hierarchy" | "affinity" | "network" | "insights";

export interface ViewState {
  tab: Tab;
  filters: SharedFilters;
  cursor: number | null; // timeline simulation upper bound (year)
  threshold: number | null;
  level: number;
  k: number;
  preferences: string[];
  focus: string[];
}

export const DEFAULT_STATE: ViewState = {
  tab: "hierarchy",
  filters: { q: "", mode: "all", yearMin: null, yearMax: null, tags: [] },
  cursor: null,
  threshold: null,
  level: 1,
  k: 1,
  preferences: [],
  focus: [],
};

const TABS: Tab[] = ["hierarchy", "affinity", "network", "insights"];

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.filters.q) params.set("q", state.filters.q);
  if (state.filters.mode !== "all") params.set("mode", state.filters.mode);
  if (state.filters.yearMin !== null) params.set("ymin", String(state.filters.yearMin));
  if (state.filters.yearMax !== null) params.set("ymax", String(state.filters.yearMax));
  for (const tag of state.filters.tags) params.append("tag", tag);
  if (state.cursor !== null) params.set("cursor", String(state.cursor));
  if (state.threshold !== null) params.set("t", String(state.threshold));
  if (state.level !== 1) params.set("level", String(state.level));
  if (state.k !== 1) params.set("k", String(state.k));
  for (const p of state.preferences) params.append("pref", p);
  for (const f of state.focus) params.append("focus", f);
  const text = params.toString();
  return `#/${state.tab}${text ? `?${text}` : ""}`;
}

export function decodeState(hash: string): ViewState {
  const state: ViewState = JSON.parse(JSON.stringify(DEFAULT_STATE));
  const match = /^#\/([a-z]+)(?:\?(.*))?$/.exec(hash);
  if (!match) return state;
  if ((TABS as string[]).includes(match[1])) state.tab = match[1] as Tab;
  const params = new URLSearchParams(match[2] ?? "");
  state.filters.q = params.get("q") ?? "";
  state.filters.mode = params.get("mode") === "any" ? "any" : "all";
  state.filters.yearMin = intOrNull(params.get("ymin"));
  state.filters.yearMax = intOrNull(params.get("ymax"));
  state.filters.tags = params.getAll("tag");
  state.cursor = intOrNull(params.get("cursor"));
  state.threshold = floatOrNull(params.get("t"));
  state.level = intOrNull(params.get("level")) ?? 1;
  state.k = intOrNull(params.get("k")) ?? 1;
  state.preferences = params.getAll("pref");
  state.focus = params.getAll("focus");
  return state;
}

function intOrNull(raw: string | null): number | null {
  if (raw === null || raw === "") return null;
  const value = Number.parseInt(raw, 10);
  return Number.isNaN(value) ? null : value;
}

function floatOrNull(raw: string | null): number | null {
  if (raw === null || raw === "") return null;
  const value = Number.parseFloat(raw);
  return Number.isNaN(value) ? null : value;
}

type Listener = (state: ViewState) => void;

export class StateStore {
  private listeners: Listener[] = [];
  state: ViewState;

  constructor(initialHash?: string) {
    this.state = decodeState(initialHash ?? (typeof location !== "undefined" ? location.hash : ""));
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    if (typeof history !== "undefined") {
      history.replaceState(null, "", encodeState(this.state));
    }
    for (const listener of this.listeners) listener(this.state);
  }

  updateFilters(patch: Partial<SharedFilters>): void {
    this.update({ filters: { ...this.state.filters, ...patch } });
  }

  toggleTag(tag: string): void {
    const tags = this.state.filters.tags.includes(tag)
      ? this.state.filters.tags.filter((t) => t !== tag)
      : [...this.state.filters.tags, tag];
    this.updateFilters({ tags });
  }
}
