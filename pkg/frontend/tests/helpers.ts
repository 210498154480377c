// Fetch mock replaying the recorded API fixtures; every number a view
// renders must trace back to one of these bodies.

import affinity from "./fixtures/affinity.json";
import insights from "./fixtures/insights.json";
import network015 from "./fixtures/network-0.15.json";
import network025 from "./fixtures/network-0.25.json";
import network035 from "./fixtures/network-0.35.json";
import papers from "./fixtures/papers.json";
import recommendDefault from "./fixtures/recommend-default.json";
import recommendEdited from "./fixtures/recommend-edited.json";
import recommendK3 from "./fixtures/recommend-k3.json";
import survey from "./fixtures/survey.json";
import taxonomy from "./fixtures/taxonomy.json";
import timeline from "./fixtures/timeline.json";
import timelineNarrow from "./fixtures/timeline-2018-2021.json";
import treemap1 from "./fixtures/treemap-1.json";
import treemap2 from "./fixtures/treemap-2.json";
import treemap3 from "./fixtures/treemap-3.json";

export const FIXTURES = {
  affinity,
  insights,
  network: { "0.15": network015, "0.25": network025, "0.35": network035 },
  papers,
  recommendDefault,
  recommendEdited,
  recommendK3,
  survey,
  taxonomy,
  timeline,
  timelineNarrow,
  treemap: { 1: treemap1, 2: treemap2, 3: treemap3 },
} as const;

export interface RecordedCall {
  method: string;
  url: string;
  body: any;
}

export interface FetchMock {
  calls: RecordedCall[];
  recommendOverride: ((body: any) => unknown) | null;
}

function filteredPapers(params: URLSearchParams) {
  const tags = params.getAll("tags");
  const yearMin = params.get("year_min");
  const yearMax = params.get("year_max");
  const q = params.get("q");
  const rows = (papers.papers as any[]).filter((paper) => {
    if (tags.length && !tags.every((t) => paper.tags.includes(t))) return false;
    if ((yearMin || yearMax) && paper.year === null) return false;
    if (yearMin && paper.year < Number(yearMin)) return false;
    if (yearMax && paper.year > Number(yearMax)) return false;
    if (q) {
      const hay = `${paper.title} ${paper.authors} ${paper.venue}`.toLowerCase();
      if (!q.toLowerCase().split(/\s+/).every((term) => hay.includes(term))) return false;
    }
    return true;
  });
  return { papers: rows, count: rows.length };
}

export function installFetchMock(): FetchMock {
  const mock: FetchMock = { calls: [], recommendOverride: null };

  globalThis.fetch = (async (input: any, init?: any) => {
    const url: string = typeof input === "string" ? input : input.url;
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body) : null;
    mock.calls.push({ method, url, body });

    const [path, queryText] = url.split("?");
    const params = new URLSearchParams(queryText ?? "");

    const respond = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    switch (path) {
      case "/api/survey":
        return respond(survey);
      case "/api/papers":
        return respond(filteredPapers(params));
      case "/api/taxonomy":
        return respond(taxonomy);
      case "/api/treemap": {
        const level = params.get("level") ?? "1";
        const table: Record<string, unknown> = {
          "1": treemap1,
          "2": treemap2,
          "3": treemap3,
        };
        return respond(table[level] ?? treemap1);
      }
      case "/api/network": {
        const threshold = params.get("threshold") ?? "0.25";
        const table = FIXTURES.network as Record<string, unknown>;
        const hit = table[threshold];
        return hit
          ? respond(hit)
          : respond({ error: "bad_request", field: "threshold", detail: "unknown" }, 400);
      }
      case "/api/affinity":
        return respond(affinity);
      case "/api/insights":
        return respond(insights);
      case "/api/timeline":
        if (params.get("year_min") === "2018" && params.get("year_max") === "2021") {
          return respond(timelineNarrow);
        }
        return respond(timeline);
      case "/api/recommend": {
        if (mock.recommendOverride) return respond(mock.recommendOverride(body));
        if (body?.preferences?.length) return respond(recommendEdited);
        if (body?.k === 3) return respond(recommendK3);
        return respond(recommendDefault);
      }
      default:
        return respond({ error: "not_found", detail: path }, 404);
    }
  }) as typeof fetch;

  return mock;
}

export async function flush(ticks = 8): Promise<void> {
  for (let i = 0; i < ticks; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function mount(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app")!;
}

export function query<T extends Element = HTMLElement>(selector: string): T {
  const node = document.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
}

export function queryAll<T extends Element = HTMLElement>(selector: string): T[] {
  return [...document.querySelectorAll<T>(selector)];
}

export function change(element: HTMLInputElement | HTMLSelectElement | HTMLTextAreaElement, value: string): void {
  element.value = value;
  element.dispatchEvent(new Event("change", { bubbles: true }));
}
