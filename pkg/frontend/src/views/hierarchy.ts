// Hierarchy tab: treemap of one taxonomy level plus a collapsible tree;
// selecting a class reveals its papers and a per-class timeline inset.

import { api, type PaperRecord, type TaxonomyNodePayload, type TreemapCell } from "../api";
import { clear, el, svg } from "../dom";
import { sparklinePath, treemap } from "../layout";
import type { StateStore } from "../state";

const WIDTH = 720;
const HEIGHT = 360;

export async function renderHierarchy(container: HTMLElement, store: StateStore): Promise<void> {
  clear(container);
  const state = store.state;
  const [tree, cells] = await Promise.all([api.taxonomy(), api.treemap(state.level)]);

  const depth = maxDepth(tree.root);
  const levelPicker = el("select", { class: "level-picker", "data-testid": "level-picker" });
  for (let level = 1; level <= depth; level++) {
    const option = el("option", { value: String(level) }, [`level ${level}`]);
    if (level === state.level) option.selected = true;
    levelPicker.append(option);
  }
  levelPicker.addEventListener("change", () => {
    store.update({ level: Number(levelPicker.value) });
  });

  container.append(
    el("div", { class: "toolbar" }, [el("label", {}, ["Treemap "]), levelPicker]),
    renderTreemap(cells.cells, store),
    el("h3", {}, ["Classification tree"]),
    renderTree(tree.root, store),
    el("div", { class: "class-detail", "data-testid": "class-detail" }),
  );

  const selected = state.filters.tags.at(-1);
  if (selected) {
    await renderClassDetail(
      container.querySelector(".class-detail")!,
      selected,
      store,
    );
  }
}

function maxDepth(node: TaxonomyNodePayload, depth = 0): number {
  if (!node.children.length) return depth;
  return Math.max(...node.children.map((c) => maxDepth(c, depth + 1)));
}

function renderTreemap(cells: TreemapCell[], store: StateStore): SVGSVGElement {
  const placements = treemap(
    cells.map((cell) => ({ value: cell.count, datum: cell })),
    { x: 0, y: 0, w: WIDTH, h: HEIGHT },
  );
  const root = svg("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "treemap",
    "data-testid": "treemap",
  });
  for (const place of placements) {
    const cell = place.datum;
    const group = svg("g", {
      class: cell.gap ? "cell gap" : "cell",
      "data-classpath": cell.classpath,
      "data-count": String(cell.count),
    });
    group.append(
      svg("rect", {
        x: place.x.toFixed(2),
        y: place.y.toFixed(2),
        width: Math.max(place.w, 0.5).toFixed(2),
        height: Math.max(place.h, 0.5).toFixed(2),
      }),
    );
    const label = svg("text", {
      x: (place.x + 4).toFixed(2),
      y: (place.y + 14).toFixed(2),
    });
    label.textContent = cell.gap ? `${cell.label} (no papers yet)` : `${cell.label} (${cell.count})`;
    group.append(label);
    group.addEventListener("click", () => store.toggleTag(cell.classpath));
    root.append(group);
  }
  return root;
}

function renderTree(node: TaxonomyNodePayload, store: StateStore): HTMLElement {
  const list = el("ul", { class: "taxonomy-tree" });
  for (const child of node.children) {
    list.append(renderNode(child, store));
  }
  return list;
}

function renderNode(node: TaxonomyNodePayload, store: StateStore): HTMLElement {
  const count = node.paper_count ?? 0;
  const label = el(
    "button",
    { class: "tree-label", "data-classpath": node.classpath },
    [`${node.label} (${count})`],
  );
  label.addEventListener("click", () => {
    store.toggleTag(node.classpath);
  });
  const item = el("li", {}, [label]);
  if (node.children.length) {
    const details = el("details", { open: "" }, []);
    const summary = el("summary", {}, []);
    summary.append(label);
    details.append(summary, renderTree(node, store));
    return el("li", {}, [details]);
  }
  return item;
}

async function renderClassDetail(
  panel: Element,
  classpath: string,
  store: StateStore,
): Promise<void> {
  const [papers, series] = await Promise.all([
    api.papers({ ...store.state.filters, tags: [classpath] }),
    api.timelineForTag(classpath),
  ]);
  clear(panel);
  panel.append(
    el("h3", {}, [`${classpath} — ${papers.count} papers`]),
    renderSparkline(series.counts, series.start, series.stop),
    paperList(papers.papers),
  );
}

export function renderSparkline(
  counts: number[],
  start: number | null,
  stop: number | null,
): SVGSVGElement {
  const chart = svg("svg", {
    viewBox: "0 0 120 24",
    class: "sparkline",
    "data-testid": "sparkline",
    "data-counts": counts.join(","),
  });
  chart.append(svg("path", { d: sparklinePath(counts, 120, 24), fill: "none" }));
  if (start !== null && stop !== null) {
    const caption = svg("title", {});
    caption.textContent = `${start}-${stop}`;
    chart.append(caption);
  }
  return chart;
}

export function paperList(papers: PaperRecord[]): HTMLElement {
  const list = el("ol", { class: "paper-list", "data-testid": "paper-list" });
  for (const paper of papers) {
    list.append(
      el("li", { "data-paper-id": String(paper.id) }, [
        el("strong", {}, [paper.title]),
        ` ${paper.authors}${paper.venue ? ` — ${paper.venue}` : ""}${paper.year ? ` (${paper.year})` : ""}`,
      ]),
    );
  }
  return list;
}
