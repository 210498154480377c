// Affinity tab: scatter of projected papers with rectangle selection; the
// selection is summarized by its five most frequent tags, and clicking a
// tag folds it into the shared filters.

import { api, type AffinityResponse } from "../api";
import { clear, el, svg } from "../dom";
import type { StateStore } from "../state";

const WIDTH = 720;
const HEIGHT = 420;
const PAD = 24;

export async function renderAffinity(container: HTMLElement, store: StateStore): Promise<void> {
  clear(container);
  const data = await api.affinity();
  const plot = renderScatter(data);
  const summary = el("div", { class: "selection-summary", "data-testid": "selection-summary" });
  container.append(plot, summary);
  wireSelection(plot, data, summary, store);
  if (data.degenerate) {
    container.append(el("p", { class: "note" }, ["projection degenerate: all profiles identical"]));
  }
}

interface Placed {
  paperId: number;
  px: number;
  py: number;
}

function scale(data: AffinityResponse): Placed[] {
  const xs = data.points.map((p) => p.x);
  const ys = data.points.map((p) => p.y);
  const xMin = Math.min(...xs, 0);
  const xMax = Math.max(...xs, 1e-9);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys, 1e-9);
  return data.points
    .filter((p) => p.paper_id !== null)
    .map((p) => ({
      paperId: p.paper_id!,
      px: PAD + ((p.x - xMin) / (xMax - xMin || 1)) * (WIDTH - 2 * PAD),
      py: PAD + ((p.y - yMin) / (yMax - yMin || 1)) * (HEIGHT - 2 * PAD),
    }));
}

function renderScatter(data: AffinityResponse): SVGSVGElement {
  const root = svg("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "affinity-plot",
    "data-testid": "affinity-plot",
  });
  for (const point of scale(data)) {
    const dot = svg("circle", {
      cx: point.px.toFixed(1),
      cy: point.py.toFixed(1),
      r: "5",
      class: "paper-dot",
      "data-paper-id": String(point.paperId),
    });
    const caption = svg("title", {});
    caption.textContent = (data.tags[String(point.paperId)] ?? []).join(", ");
    dot.append(caption);
    root.append(dot);
  }
  return root;
}

function wireSelection(
  plot: SVGSVGElement,
  data: AffinityResponse,
  summary: HTMLElement,
  store: StateStore,
): void {
  let start: { x: number; y: number } | null = null;
  let marquee: SVGRectElement | null = null;

  const toLocal = (event: MouseEvent) => {
    const box = plot.getBoundingClientRect();
    const width = box.width || WIDTH;
    const height = box.height || HEIGHT;
    return {
      x: ((event.clientX - box.left) / width) * WIDTH,
      y: ((event.clientY - box.top) / height) * HEIGHT,
    };
  };

  plot.addEventListener("mousedown", (event) => {
    start = toLocal(event);
    marquee = svg("rect", { class: "marquee" });
    plot.append(marquee);
  });
  plot.addEventListener("mousemove", (event) => {
    if (!start || !marquee) return;
    const now = toLocal(event);
    marquee.setAttribute("x", String(Math.min(start.x, now.x)));
    marquee.setAttribute("y", String(Math.min(start.y, now.y)));
    marquee.setAttribute("width", String(Math.abs(now.x - start.x)));
    marquee.setAttribute("height", String(Math.abs(now.y - start.y)));
  });
  plot.addEventListener("mouseup", (event) => {
    if (!start) return;
    const end = toLocal(event);
    const x0 = Math.min(start.x, end.x);
    const x1 = Math.max(start.x, end.x);
    const y0 = Math.min(start.y, end.y);
    const y1 = Math.max(start.y, end.y);
    start = null;
    marquee?.remove();
    marquee = null;
    const chosen = scale(data)
      .filter((p) => p.px >= x0 && p.px <= x1 && p.py >= y0 && p.py <= y1)
      .map((p) => p.paperId);
    renderSummary(summary, selectionSummary(data.tags, chosen), chosen.length, store);
  });
}

// Tag frequencies of the selected papers, top five, ties alphabetical.
export function selectionSummary(
  tags: Record<string, string[]>,
  selected: number[],
): [string, number][] {
  const counts = new Map<string, number>();
  for (const id of selected) {
    for (const tag of tags[String(id)] ?? []) {
      counts.set(tag, (counts.get(tag) ?? 0) + 1);
    }
  }
  return [...counts.entries()]
    .sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]))
    .slice(0, 5);
}

function renderSummary(
  summary: HTMLElement,
  top: [string, number][],
  size: number,
  store: StateStore,
): void {
  clear(summary);
  if (!size) {
    summary.append(el("p", {}, ["empty selection"]));
    return;
  }
  summary.append(el("p", {}, [`${size} papers selected; top tags:`]));
  for (const [tag, count] of top) {
    const chip = el(
      "button",
      { class: "tag-chip", "data-tag": tag, "data-count": String(count) },
      [`${tag} (${count})`],
    );
    chip.addEventListener("click", () => store.toggleTag(tag));
    summary.append(chip);
  }
}
