// Insights tab: survey-wide gap metrics plus the "what paper should I
// write next?" wizard. Every control change issues a fresh POST to
// /api/recommend (superseding any in-flight request) and each generated
// paper is shown in three steps: features in the hierarchy, position in
// tag space, and the nearest known neighbors with extend/relax diffs.

import {
  api,
  type InsightsResponse,
  type PaperRecord,
  type RecommendResponse,
  type SurveyInfo,
  type TaxonomyNodePayload,
} from "../api";
import { clear, el, svg } from "../dom";
import type { StateStore } from "../state";

let inflight: AbortController | null = null;

export async function renderInsights(
  container: HTMLElement,
  store: StateStore,
  _survey: SurveyInfo,
): Promise<void> {
  clear(container);
  const [insights, taxonomy, papers] = await Promise.all([
    api.insights(),
    api.taxonomy(),
    api.papers({ q: "", mode: "all", yearMin: null, yearMax: null, tags: [] }),
  ]);
  const byId = new Map(papers.papers.map((p) => [p.id, p]));

  container.append(renderMetrics(insights));
  container.append(el("h3", {}, ["What paper should I write next?"]));
  container.append(renderControls(store, taxonomy.root, papers.papers));
  const results = el("div", { class: "wizard-results", "data-testid": "wizard-results" });
  container.append(results);
  const detail = el("div", { class: "paper-detail", "data-testid": "paper-detail" });
  container.append(detail);

  inflight?.abort();
  inflight = new AbortController();
  try {
    const body: { k: number; preferences?: string[]; focus?: string[] } = {
      k: store.state.k,
    };
    if (store.state.preferences.length) body.preferences = store.state.preferences;
    if (store.state.focus.length) body.focus = store.state.focus;
    const outcome = await api.recommend(body, inflight.signal);
    renderResults(results, detail, outcome, insights, taxonomy.root, byId);
  } catch (error) {
    if ((error as Error).name === "AbortError") return;
    results.append(el("p", { class: "error" }, [String(error)]));
  }
}

function renderMetrics(insights: InsightsResponse): HTMLElement {
  const gaps = el("ul", { class: "gap-list", "data-testid": "gap-list" });
  for (const classpath of insights.gaps) {
    gaps.append(el("li", {}, [classpath]));
  }
  const rank = (entries: { classpath: string; count: number }[]) =>
    el("ol", {}, entries.map((e) => el("li", {}, [`${e.classpath} (${e.count})`])));
  return el("div", { class: "insight-metrics" }, [
    el("p", {}, [
      "Papers yet to be written: ",
      el("strong", { "data-testid": "unwritten-count" }, [insights.unwritten_count_str]),
      ` across ${insights.tag_count} tags, ${insights.distinct_profiles} known distinct profiles.`,
    ]),
    el("h4", {}, ["Most covered classes"]),
    rank(insights.most_popular),
    el("h4", {}, ["Least covered classes"]),
    rank(insights.least_popular),
    el("h4", {}, ["Classes with no papers yet"]),
    gaps,
  ]);
}

function renderControls(
  store: StateStore,
  root: TaxonomyNodePayload,
  papers: PaperRecord[],
): HTMLElement {
  const kPicker = el("select", { "data-testid": "wizard-k" });
  for (const k of [1, 2, 3]) {
    const option = el("option", { value: String(k) }, [`k = ${k}`]);
    if (k === store.state.k) option.selected = true;
    kPicker.append(option);
  }
  kPicker.addEventListener("change", () => store.update({ k: Number(kPicker.value) }));

  const prefs = el("textarea", {
    "data-testid": "wizard-preferences",
    rows: "6",
    placeholder: "one signed classpath per line; blank = nominal defaults",
  });
  prefs.value = store.state.preferences.join("\n");
  prefs.addEventListener("change", () => {
    store.update({
      preferences: prefs.value
        .split("\n")
        .map((line) => line.trim())
        .filter(Boolean),
    });
  });

  const focusTag = el("select", { "data-testid": "wizard-focus-tag" });
  focusTag.append(el("option", { value: "" }, ["focus on a class…"]));
  for (const node of walk(root)) {
    focusTag.append(el("option", { value: node.classpath }, [node.classpath]));
  }
  focusTag.addEventListener("change", () => {
    if (!focusTag.value) return;
    store.update({ focus: [...store.state.focus, focusTag.value] });
  });

  const focusPaper = el("select", { "data-testid": "wizard-focus-paper" });
  focusPaper.append(el("option", { value: "" }, ["focus on an existing paper…"]));
  for (const paper of papers) {
    focusPaper.append(el("option", { value: String(paper.id) }, [paper.title]));
  }
  focusPaper.addEventListener("change", () => {
    const paper = papers.find((p) => String(p.id) === focusPaper.value);
    if (!paper) return;
    // focusing on a paper enforces the features it already has
    store.update({ focus: [...new Set([...store.state.focus, ...paper.tags])] });
  });

  const chips = el("div", { class: "focus-chips", "data-testid": "focus-chips" });
  for (const term of store.state.focus) {
    const chip = el("button", { class: "tag-chip" }, [`${term} ✕`]);
    chip.addEventListener("click", () =>
      store.update({ focus: store.state.focus.filter((f) => f !== term) }),
    );
    chips.append(chip);
  }

  const generate = el("button", { class: "generate", "data-testid": "wizard-generate" }, [
    "Generate",
  ]);
  generate.addEventListener("click", () => store.update({}));

  return el("div", { class: "wizard-controls" }, [
    el("div", {}, [kPicker, generate]),
    el("label", {}, ["Preference order (nominal settings first)"]),
    prefs,
    el("div", {}, [focusTag, focusPaper]),
    chips,
  ]);
}

function* walk(node: TaxonomyNodePayload): Generator<TaxonomyNodePayload> {
  for (const child of node.children) {
    yield child;
    yield* walk(child);
  }
}

function renderResults(
  results: HTMLElement,
  detail: HTMLElement,
  outcome: RecommendResponse,
  insights: InsightsResponse,
  root: TaxonomyNodePayload,
  byId: Map<number, PaperRecord>,
): void {
  clear(results);
  if (!outcome.recommendations.length) {
    results.append(
      el("p", { class: "exhausted", "data-testid": "wizard-exhausted" }, [
        "no papers remain: every valid profile is already covered",
      ]),
    );
    return;
  }
  outcome.recommendations.forEach((rec, index) => {
    const block = el("section", {
      class: "recommendation",
      "data-testid": `recommendation-${index}`,
    });
    block.append(el("h4", {}, [`Generated paper ${index + 1}`]));

    // step 1: the feature profile, highlighted in the hierarchy
    const features = el("ul", { class: "feature-list" });
    for (const feature of rec.features) {
      features.append(el("li", {}, [feature]));
    }
    if (!rec.features.length) {
      features.append(el("li", {}, ["(all nominal settings)"]));
    }
    block.append(
      el("div", { class: "step step-features" }, [
        el("h5", {}, ["1. Features"]),
        features,
        highlightTree(root, new Set(rec.features)),
      ]),
    );

    // step 2: position among the known papers in tag space
    block.append(
      el("div", { class: "step step-map" }, [
        el("h5", {}, ["2. Position in tag space"]),
        tagSpaceMap(insights, outcome.positions[index]),
      ]),
    );

    // step 3: nearest known neighbors with extend/relax diffs
    const neighbors = el("div", { class: "step step-neighbors" }, [
      el("h5", {}, ["3. Closest known papers"]),
    ]);
    for (const neighbor of rec.neighbors) {
      const card = el("div", { class: "neighbor", "data-paper-id": String(neighbor.paper_id) });
      const link = el("a", { href: "#", class: "neighbor-title" }, [
        `${neighbor.title ?? `paper ${neighbor.paper_id}`} (distance ${neighbor.distance})`,
      ]);
      link.addEventListener("click", (event) => {
        event.preventDefault();
        renderPaperDetail(detail, byId.get(neighbor.paper_id));
      });
      card.append(link);
      for (const extend of neighbor.extend) {
        card.append(el("span", { class: "chip extend", "data-feature": extend }, [`+ ${extend}`]));
      }
      for (const relax of neighbor.relax) {
        card.append(el("span", { class: "chip relax", "data-feature": relax }, [`− ${relax}`]));
      }
      neighbors.append(card);
    }
    block.append(neighbors);
    results.append(block);
  });
  if (outcome.exhausted) {
    results.append(
      el("p", { class: "exhausted", "data-testid": "wizard-exhausted" }, [
        "solution space exhausted: no further papers remain",
      ]),
    );
  }
}

function highlightTree(root: TaxonomyNodePayload, features: Set<string>): HTMLElement {
  const covers = (classpath: string): boolean => {
    for (const feature of features) {
      if (feature === classpath || feature.startsWith(`${classpath} > `)) return true;
    }
    return false;
  };
  const render = (node: TaxonomyNodePayload): HTMLElement => {
    const list = el("ul", { class: "highlight-tree" });
    for (const child of node.children) {
      const hit = covers(child.classpath);
      const item = el(
        "li",
        { class: hit ? "on-path" : "off-path", "data-classpath": child.classpath },
        [child.label],
      );
      if (child.children.length && hit) {
        item.append(render(child));
      }
      list.append(item);
    }
    return list;
  };
  return render(root);
}

function tagSpaceMap(
  insights: InsightsResponse,
  position: { x: number; y: number } | undefined,
): SVGSVGElement {
  const width = 360;
  const height = 220;
  const points = insights.map_points.filter((p) => p.paper_id !== null);
  const xs = points.map((p) => p.x).concat(position ? [position.x] : []);
  const ys = points.map((p) => p.y).concat(position ? [position.y] : []);
  const xMin = Math.min(...xs, -1e-9);
  const xMax = Math.max(...xs, 1e-9);
  const yMin = Math.min(...ys, -1e-9);
  const yMax = Math.max(...ys, 1e-9);
  const sx = (x: number) => 12 + ((x - xMin) / (xMax - xMin || 1)) * (width - 24);
  const sy = (y: number) => 12 + ((y - yMin) / (yMax - yMin || 1)) * (height - 24);

  const root = svg("svg", {
    viewBox: `0 0 ${width} ${height}`,
    class: "tag-space-map",
    "data-testid": "tag-space-map",
  });
  for (const point of points) {
    root.append(
      svg("circle", {
        cx: sx(point.x).toFixed(1),
        cy: sy(point.y).toFixed(1),
        r: "4",
        class: "paper-dot",
        "data-paper-id": String(point.paper_id),
      }),
    );
  }
  if (position) {
    root.append(
      svg("circle", {
        cx: sx(position.x).toFixed(1),
        cy: sy(position.y).toFixed(1),
        r: "7",
        class: "hypothetical-dot",
        "data-testid": "hypothetical-dot",
      }),
    );
  }
  return root;
}

function renderPaperDetail(panel: HTMLElement, paper: PaperRecord | undefined): void {
  clear(panel);
  if (!paper) return;
  panel.append(
    el("h4", {}, [paper.title]),
    el("p", {}, [
      `${paper.authors}${paper.venue ? ` — ${paper.venue}` : ""}${paper.year ? ` (${paper.year})` : ""}`,
    ]),
    el("p", { class: "tags" }, [paper.tags.join(", ")]),
  );
}
