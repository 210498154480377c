// Shell: tab bar, the shared filter bar (keywords, year range, selected
// tags), and the timeline simulation slider. Shared filters apply
// identically across tabs and the whole view state lives in the URL.

import { api } from "./api";
import { clear, el } from "./dom";
import type { StateStore, Tab } from "./state";
import { renderAffinity } from "./views/affinity";
import { renderHierarchy } from "./views/hierarchy";
import { renderSparkline } from "./views/hierarchy";
import { renderInsights } from "./views/insights";
import { renderNetwork } from "./views/network";

const TABS: { id: Tab; label: string }[] = [
  { id: "hierarchy", label: "Hierarchy" },
  { id: "affinity", label: "Affinity" },
  { id: "network", label: "Network" },
  { id: "insights", label: "Insights" },
];

export async function createApp(root: HTMLElement, store: StateStore): Promise<void> {
  const survey = await api.survey();
  const header = el("header", {}, [
    el("h1", {}, [survey.title_text || "Survey explorer"]),
    el("p", { class: "subtitle" }, [
      `${survey.paper_count} papers, ${survey.tag_count} tags`,
    ]),
  ]);
  const tabBar = el("nav", { class: "tabs", "data-testid": "tabs" });
  const filterBar = el("div", { class: "filters", "data-testid": "filter-bar" });
  const timelineBar = el("div", { class: "timeline-bar", "data-testid": "timeline-bar" });
  const content = el("main", { class: "content", "data-testid": "content" });
  root.append(header, tabBar, filterBar, timelineBar, content);

  let renderPass = 0;
  const rerender = async () => {
    const pass = ++renderPass;
    renderTabs(tabBar, store);
    renderFilters(filterBar, store);
    await renderTimelineBar(timelineBar, store);
    if (pass !== renderPass) return; // superseded by a newer state change
    const view = store.state.tab;
    clear(content);
    const pane = el("div", { class: `pane pane-${view}` });
    content.append(pane);
    if (view === "hierarchy") await renderHierarchy(pane, store);
    else if (view === "affinity") await renderAffinity(pane, store);
    else if (view === "network") await renderNetwork(pane, store, survey);
    else await renderInsights(pane, store, survey);
  };

  store.subscribe(() => {
    void rerender();
  });
  await rerender();
}

function renderTabs(bar: HTMLElement, store: StateStore): void {
  clear(bar);
  for (const tab of TABS) {
    const button = el(
      "button",
      {
        class: store.state.tab === tab.id ? "tab active" : "tab",
        "data-tab": tab.id,
      },
      [tab.label],
    );
    button.addEventListener("click", () => store.update({ tab: tab.id }));
    bar.append(button);
  }
}

function renderFilters(bar: HTMLElement, store: StateStore): void {
  clear(bar);
  const filters = store.state.filters;

  const q = el("input", {
    type: "search",
    placeholder: "keywords…",
    value: filters.q,
    "data-testid": "filter-q",
  });
  q.addEventListener("change", () => store.updateFilters({ q: q.value }));

  const mode = el("select", { "data-testid": "filter-mode" });
  for (const value of ["all", "any"] as const) {
    const option = el("option", { value }, [value]);
    if (filters.mode === value) option.selected = true;
    mode.append(option);
  }
  mode.addEventListener("change", () =>
    store.updateFilters({ mode: mode.value as "all" | "any" }),
  );

  const yearMin = el("input", {
    type: "number",
    placeholder: "from",
    value: filters.yearMin === null ? "" : String(filters.yearMin),
    "data-testid": "filter-year-min",
  });
  yearMin.addEventListener("change", () =>
    store.updateFilters({ yearMin: yearMin.value ? Number(yearMin.value) : null }),
  );
  const yearMax = el("input", {
    type: "number",
    placeholder: "to",
    value: filters.yearMax === null ? "" : String(filters.yearMax),
    "data-testid": "filter-year-max",
  });
  yearMax.addEventListener("change", () =>
    store.updateFilters({ yearMax: yearMax.value ? Number(yearMax.value) : null }),
  );

  const chips = el("span", { class: "active-tags", "data-testid": "active-tags" });
  for (const tag of filters.tags) {
    const chip = el("button", { class: "tag-chip", "data-tag": tag }, [`${tag} ✕`]);
    chip.addEventListener("click", () => store.toggleTag(tag));
    chips.append(chip);
  }

  bar.append(q, mode, el("label", {}, ["years "]), yearMin, yearMax, chips);
}

async function renderTimelineBar(bar: HTMLElement, store: StateStore): Promise<void> {
  clear(bar);
  const series = await api.timeline(store.state.filters);
  if (series.start === null || series.stop === null) return;
  const cursor = store.state.cursor ?? series.stop;

  const slider = el("input", {
    type: "range",
    min: String(series.start),
    max: String(series.stop),
    value: String(Math.min(Math.max(cursor, series.start), series.stop)),
    "data-testid": "timeline-cursor",
  });
  const readout = el("span", { class: "cursor-readout", "data-testid": "cursor-readout" }, [
    `≤ ${slider.value}`,
  ]);
  slider.addEventListener("change", () => {
    store.update({ cursor: Number(slider.value) });
  });
  slider.addEventListener("input", () => {
    readout.textContent = `≤ ${slider.value}`;
  });

  bar.append(
    el("label", {}, [`timeline ${series.start}–${series.stop} `]),
    slider,
    readout,
    renderSparkline(series.counts, series.start, series.stop),
  );
}
