// Pure layout code: squarified treemap, seeded force-directed graph, and
// sparkline paths. Deterministic by construction so renders are testable.

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface TreemapItem<T> {
  value: number;
  datum: T;
}

export interface TreemapPlacement<T> extends Rect {
  datum: T;
}

// Squarified treemap (Bruls et al. style): lay rows along the short side,
// keeping cell aspect ratios near 1. Zero-value items get hairline cells so
// gap classes stay visible.
export function treemap<T>(
  items: TreemapItem<T>[],
  bounds: Rect,
  minValue = 0.15,
): TreemapPlacement<T>[] {
  if (!items.length) return [];
  const total = items.reduce((acc, item) => acc + Math.max(item.value, minValue), 0);
  const area = bounds.w * bounds.h;
  const scaled = items.map((item) => ({
    datum: item.datum,
    area: (Math.max(item.value, minValue) / total) * area,
  }));
  const out: TreemapPlacement<T>[] = [];
  let rect = { ...bounds };
  let row: { datum: T; area: number }[] = [];

  const worst = (rowItems: { area: number }[], side: number): number => {
    const sum = rowItems.reduce((a, r) => a + r.area, 0);
    const max = Math.max(...rowItems.map((r) => r.area));
    const min = Math.min(...rowItems.map((r) => r.area));
    const s2 = sum * sum;
    return Math.max((side * side * max) / s2, s2 / (side * side * min));
  };

  const layoutRow = (rowItems: { datum: T; area: number }[]) => {
    const sum = rowItems.reduce((a, r) => a + r.area, 0);
    const horizontal = rect.w >= rect.h;
    const side = horizontal ? rect.h : rect.w;
    const breadth = side > 0 ? sum / side : 0;
    let offset = 0;
    for (const item of rowItems) {
      const length = breadth > 0 ? item.area / breadth : 0;
      out.push(
        horizontal
          ? { x: rect.x, y: rect.y + offset, w: breadth, h: length, datum: item.datum }
          : { x: rect.x + offset, y: rect.y, w: length, h: breadth, datum: item.datum },
      );
      offset += length;
    }
    if (horizontal) {
      rect = { x: rect.x + breadth, y: rect.y, w: rect.w - breadth, h: rect.h };
    } else {
      rect = { x: rect.x, y: rect.y + breadth, w: rect.w, h: rect.h - breadth };
    }
  };

  for (const item of scaled) {
    const side = Math.min(rect.w, rect.h);
    if (!row.length || worst([...row, item], side) <= worst(row, side)) {
      row.push(item);
    } else {
      layoutRow(row);
      row = [item];
    }
  }
  if (row.length) layoutRow(row);
  return out;
}

// Deterministic PRNG (mulberry32) so force layouts are snapshot-testable.
export function seededRandom(seed: number): () => number {
  let t = seed >>> 0;
  return () => {
    t += 0x6d2b79f5;
    let x = t;
    x = Math.imul(x ^ (x >>> 15), x | 1);
    x ^= x + Math.imul(x ^ (x >>> 7), x | 61);
    return ((x ^ (x >>> 14)) >>> 0) / 4294967296;
  };
}

export interface ForceNode {
  id: number;
  x: number;
  y: number;
}

export function forceLayout(
  ids: number[],
  edges: [number, number][],
  width: number,
  height: number,
  iterations = 150,
  seed = 42,
): ForceNode[] {
  const rand = seededRandom(seed);
  const nodes = ids.map((id) => ({
    id,
    x: rand() * width,
    y: rand() * height,
    vx: 0,
    vy: 0,
  }));
  const index = new Map(nodes.map((n, i) => [n.id, i]));
  const k = Math.sqrt((width * height) / Math.max(nodes.length, 1));

  for (let step = 0; step < iterations; step++) {
    const heat = 0.1 * (1 - step / iterations) * Math.min(width, height);
    for (const node of nodes) {
      node.vx = 0;
      node.vy = 0;
    }
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = nodes[i];
        const b = nodes[j];
        let dx = a.x - b.x;
        let dy = a.y - b.y;
        let d2 = dx * dx + dy * dy;
        if (d2 < 1e-6) {
          dx = 0.01 * (i - j);
          dy = 0.01;
          d2 = dx * dx + dy * dy;
        }
        const repulse = (k * k) / d2;
        a.vx += dx * repulse * 0.01;
        a.vy += dy * repulse * 0.01;
        b.vx -= dx * repulse * 0.01;
        b.vy -= dy * repulse * 0.01;
      }
    }
    for (const [from, to] of edges) {
      const a = nodes[index.get(from)!];
      const b = nodes[index.get(to)!];
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const distance = Math.sqrt(dx * dx + dy * dy) || 1;
      const attract = (distance * distance) / k / distance;
      a.vx += dx * attract * 0.01;
      a.vy += dy * attract * 0.01;
      b.vx -= dx * attract * 0.01;
      b.vy -= dy * attract * 0.01;
    }
    for (const node of nodes) {
      const speed = Math.sqrt(node.vx * node.vx + node.vy * node.vy) || 1;
      const capped = Math.min(speed, heat);
      node.x += (node.vx / speed) * capped;
      node.y += (node.vy / speed) * capped;
      node.x = Math.min(width - 10, Math.max(10, node.x));
      node.y = Math.min(height - 10, Math.max(10, node.y));
    }
  }
  return nodes.map(({ id, x, y }) => ({ id, x, y }));
}

// SVG path for a sparkline over per-year counts.
export function sparklinePath(
  counts: number[],
  width: number,
  height: number,
): string {
  if (!counts.length) return "";
  const max = Math.max(...counts, 1);
  const stepX = counts.length > 1 ? width / (counts.length - 1) : 0;
  return counts
    .map((count, i) => {
      const x = (i * stepX).toFixed(2);
      const y = (height - (count / max) * (height - 2) - 1).toFixed(2);
      return `${i === 0 ? "M" : "L"}${x},${y}`;
    })
    .join(" ");
}
