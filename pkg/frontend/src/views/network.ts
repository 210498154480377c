// Network tab: force-directed citation graph. Node size tracks in-degree,
// hover reveals metadata, the threshold selector is limited to precomputed
// graphs, and the timeline cursor re-renders the subgraph of papers inside
// the cursor range (full range = the untouched view).

import { api, type NetworkResponse, type SurveyInfo } from "../api";
import { clear, el, svg } from "../dom";
import { forceLayout } from "../layout";
import type { StateStore } from "../state";
import { renderSparkline } from "./hierarchy";

const WIDTH = 720;
const HEIGHT = 460;

export async function renderNetwork(
  container: HTMLElement,
  store: StateStore,
  survey: SurveyInfo,
): Promise<void> {
  clear(container);
  const state = store.state;
  if (!survey.thresholds.length) {
    container.append(el("p", { class: "note" }, ["no citation graphs in this snapshot"]));
    return;
  }
  const threshold =
    state.threshold !== null && survey.thresholds.includes(state.threshold)
      ? state.threshold
      : survey.thresholds[Math.floor(survey.thresholds.length / 2)];

  const picker = el("select", { class: "threshold-picker", "data-testid": "threshold-picker" });
  for (const value of survey.thresholds) {
    const option = el("option", { value: String(value) }, [String(value)]);
    if (value === threshold) option.selected = true;
    picker.append(option);
  }
  picker.addEventListener("change", () => store.update({ threshold: Number(picker.value) }));

  const [graph, series] = await Promise.all([
    api.network(threshold),
    api.timeline(state.filters),
  ]);

  container.append(
    el("div", { class: "toolbar" }, [el("label", {}, ["Match threshold "]), picker]),
    renderGraph(graph, store),
    el("div", { class: "network-meta", "data-testid": "network-meta" }, [
      `${graph.edges.length} edges`,
    ]),
    renderSparkline(series.counts, series.start, series.stop),
  );
}

export function visibleNodeIds(graph: NetworkResponse, cursor: number | null): Set<number> {
  const years = graph.nodes.map((n) => n.year).filter((y): y is number => y !== null);
  const maxYear = years.length ? Math.max(...years) : null;
  // a cursor at (or beyond) the newest year reproduces the unfiltered view
  if (cursor === null || maxYear === null || cursor >= maxYear) {
    return new Set(graph.nodes.map((n) => n.id));
  }
  return new Set(
    graph.nodes.filter((n) => n.year !== null && n.year <= cursor).map((n) => n.id),
  );
}

function renderGraph(graph: NetworkResponse, store: StateStore): SVGSVGElement {
  const visible = visibleNodeIds(graph, store.state.cursor);
  const nodes = graph.nodes.filter((n) => visible.has(n.id));
  const edges = graph.edges.filter((e) => visible.has(e.from) && visible.has(e.to));
  const placed = forceLayout(
    nodes.map((n) => n.id),
    edges.map((e) => [e.from, e.to]),
    WIDTH,
    HEIGHT,
  );
  const position = new Map(placed.map((p) => [p.id, p]));
  const maxDegree = Math.max(...nodes.map((n) => n.in_degree), 1);

  const root = svg("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "network-plot",
    "data-testid": "network-plot",
  });
  for (const edge of edges) {
    const a = position.get(edge.from)!;
    const b = position.get(edge.to)!;
    root.append(
      svg("line", {
        x1: a.x.toFixed(1),
        y1: a.y.toFixed(1),
        x2: b.x.toFixed(1),
        y2: b.y.toFixed(1),
        class: "citation-edge",
        "data-from": String(edge.from),
        "data-to": String(edge.to),
      }),
    );
  }
  for (const node of nodes) {
    const at = position.get(node.id)!;
    const radius = 4 + 10 * (node.in_degree / maxDegree);
    const dot = svg("circle", {
      cx: at.x.toFixed(1),
      cy: at.y.toFixed(1),
      r: radius.toFixed(2),
      class: "network-node",
      "data-paper-id": String(node.id),
      "data-in-degree": String(node.in_degree),
    });
    const caption = svg("title", {});
    caption.textContent = `${node.title}${node.year ? ` (${node.year})` : ""} — cited ${node.in_degree}x`;
    dot.append(caption);
    root.append(dot);
  }
  return root;
}
