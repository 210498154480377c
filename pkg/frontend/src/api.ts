// Typed client for the versioned /api schema. The UI never computes domain
// results locally: every displayed number comes from one of these payloads.

export interface SurveyInfo {
  title_text: string;
  paper_count: number;
  tag_count: number;
  taxonomies: string[];
  thresholds: number[];
}

export interface PaperRecord {
  id: number;
  title: string;
  authors: string;
  venue: string;
  year: number | null;
  abstract: string | null;
  tags: string[];
}

export interface PapersResponse {
  papers: PaperRecord[];
  count: number;
}

export interface TaxonomyNodePayload {
  label: string;
  classpath: string;
  is_leaf: boolean;
  children: TaxonomyNodePayload[];
  paper_count?: number;
  papers?: number[];
  first_year?: number | null;
  last_year?: number | null;
  gap?: boolean;
}

export interface TaxonomyResponse {
  name: string;
  default: boolean;
  root: TaxonomyNodePayload;
}

export interface TreemapCell {
  classpath: string;
  label: string;
  count: number;
  gap: boolean;
  is_leaf: boolean;
}

export interface TreemapResponse {
  taxonomy: string;
  level: number;
  cells: TreemapCell[];
}

export interface NetworkNode {
  id: number;
  title: string;
  year: number | null;
  in_degree: number;
}

export interface NetworkEdge {
  from: number;
  to: number;
  score: number;
  matched_span: string;
}

export interface NetworkResponse {
  threshold: number;
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface ProjectedPoint {
  paper_id: number | null;
  x: number;
  y: number;
}

export interface AffinityResponse {
  points: ProjectedPoint[];
  degenerate: boolean;
  tags: Record<string, string[]>;
}

export interface ClassCount {
  classpath: string;
  count: number;
}

export interface InsightsResponse {
  map_points: ProjectedPoint[];
  most_popular: ClassCount[];
  least_popular: ClassCount[];
  gaps: string[];
  tag_count: number;
  distinct_profiles: number;
  unwritten_count: number;
  unwritten_count_str: string;
}

export interface TimelineResponse {
  start: number | null;
  stop: number | null;
  counts: number[];
  no_year: number;
}

export interface NeighborPayload {
  paper_id: number;
  distance: number;
  extend: string[];
  relax: string[];
  title?: string;
  year?: number | null;
}

export interface RecommendationPayload {
  profile: number[];
  features: string[];
  satisfied_preferences: string[];
  rejected_preferences: string[];
  neighbors: NeighborPayload[];
}

export interface RecommendResponse {
  recommendations: RecommendationPayload[];
  exhausted: boolean;
  positions: { x: number; y: number }[];
}

export interface SharedFilters {
  q: string;
  mode: "all" | "any";
  yearMin: number | null;
  yearMax: number | null;
  tags: string[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
    public field?: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal });
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body.detail ?? "request failed", body.field);
  }
  return body as T;
}

async function postJson<T>(url: string, payload: unknown, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
    signal,
  });
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body.detail ?? "request failed", body.field);
  }
  return body as T;
}

export function filterQuery(filters: SharedFilters): string {
  const params = new URLSearchParams();
  if (filters.q) params.set("q", filters.q);
  if (filters.mode !== "all") params.set("mode", filters.mode);
  if (filters.yearMin !== null) params.set("year_min", String(filters.yearMin));
  if (filters.yearMax !== null) params.set("year_max", String(filters.yearMax));
  for (const tag of filters.tags) params.append("tags", tag);
  const text = params.toString();
  return text ? `?${text}` : "";
}

export const api = {
  survey: () => getJson<SurveyInfo>("/api/survey"),
  papers: (filters: SharedFilters) =>
    getJson<PapersResponse>(`/api/papers${filterQuery(filters)}`),
  taxonomy: (name?: string) =>
    getJson<TaxonomyResponse>(`/api/taxonomy${name ? `?name=${encodeURIComponent(name)}` : ""}`),
  treemap: (level: number) => getJson<TreemapResponse>(`/api/treemap?level=${level}`),
  network: (threshold: number) =>
    getJson<NetworkResponse>(`/api/network?threshold=${threshold}`),
  affinity: () => getJson<AffinityResponse>("/api/affinity"),
  insights: () => getJson<InsightsResponse>("/api/insights"),
  timeline: (filters: SharedFilters) =>
    getJson<TimelineResponse>(`/api/timeline${filterQuery(filters)}`),
  timelineForTag: (tag: string) =>
    getJson<TimelineResponse>(`/api/timeline?tags=${encodeURIComponent(tag)}`),
  recommend: (
    body: { k: number; preferences?: string[]; focus?: string[] },
    signal?: AbortSignal,
  ) => postJson<RecommendResponse>("/api/recommend", body, signal),
};
