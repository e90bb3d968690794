/** Typed client for the topictrap HTTP API.
 *
 * Every endpoint is a GET returning canonical JSON. Errors come back as
 * `{"error": {"category", "message"}}` with status 400 or 404; those are
 * surfaced as RequestFailed so the UI can tell a bad request from a
 * network outage.
 */

export type TermKind = "topic" | "competency" | "process" | "level";

export interface AcItem {
  uri: string;
  kind: TermKind;
  label: string;
  label_lang: string;
  count: number;
}

export interface SearchHit {
  resource_id: string;
  title: string;
  score: number;
  match_kinds: string[];
  matched_terms: string[];
}

export interface SearchPage {
  total: number;
  offset: number;
  limit: number;
  hits: SearchHit[];
}

/** kind is the edge provenance: manual, policy_*, or lsa:<lang>. */
export interface Suggestion {
  uri: string;
  label: string;
  kind: string;
  similarity: number;
  count: number;
}

export interface TermRef {
  uri: string;
  label: string;
  count: number;
}

export interface LabelRow {
  lang: string;
  text: string;
  preferred: boolean;
}

export interface TopicPage {
  uri: string;
  kind: TermKind;
  count: number;
  labels: LabelRow[];
  ancestors: TermRef[];
  children: TermRef[];
  relatives: Suggestion[];
}

export class RequestFailed extends Error {
  constructor(
    readonly status: number,
    readonly category: string,
    message: string,
  ) {
    super(message);
    this.name = "RequestFailed";
  }
}

export type FetchFn = (url: string) => Promise<Response>;

export interface SearchParams {
  term?: string;
  words?: string;
  lang?: string;
  offset?: number;
  limit?: number;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchFn = (url) => fetch(url),
  ) {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const qs = new URLSearchParams(params).toString();
    const url = `${this.baseUrl}${path}${qs ? `?${qs}` : ""}`;
    const resp = await this.fetchFn(url);
    if (!resp.ok) {
      let category = "HTTP";
      let message = `request failed with status ${resp.status}`;
      try {
        const body = await resp.json();
        category = body.error.category;
        message = body.error.message;
      } catch {
        // non-JSON error body, keep the generic message
      }
      throw new RequestFailed(resp.status, category, message);
    }
    return (await resp.json()) as T;
  }

  autocomplete(q: string, lang: string, limit?: number): Promise<{ items: AcItem[] }> {
    const params: Record<string, string> = { q, lang };
    if (limit !== undefined) params.limit = String(limit);
    return this.get("/api/autocomplete", params);
  }

  search(p: SearchParams): Promise<SearchPage> {
    const params: Record<string, string> = {};
    if (p.term !== undefined) params.term = p.term;
    if (p.words !== undefined) params.words = p.words;
    if (p.lang !== undefined) params.lang = p.lang;
    if (p.offset !== undefined) params.offset = String(p.offset);
    if (p.limit !== undefined) params.limit = String(p.limit);
    return this.get("/api/search", params);
  }

  suggest(term: string, lang: string, limit?: number): Promise<{ items: Suggestion[] }> {
    const params: Record<string, string> = { term, lang };
    if (limit !== undefined) params.limit = String(limit);
    return this.get("/api/suggest", params);
  }

  topic(uri: string, lang: string): Promise<TopicPage> {
    return this.get(`/api/topic/${encodeURIComponent(uri)}`, { lang });
  }
}
