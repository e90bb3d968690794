/** Single user-session state over the API client.
 *
 * The session owns everything the page renders: the query text, the
 * selected term with its hits and suggestions, the optional topic panel,
 * and the navigation history. Mutations go through the async methods
 * below; subscribers are notified after each consistent update, so
 * suggestions on screen always belong to the currently selected term.
 */

import type {
  AcItem,
  SearchHit,
  SearchPage,
  SearchParams,
  Suggestion,
  TopicPage,
} from "./api";

/** What the session needs from the backend; ApiClient satisfies it. */
export interface SearchApi {
  autocomplete(q: string, lang: string, limit?: number): Promise<{ items: AcItem[] }>;
  search(p: SearchParams): Promise<SearchPage>;
  suggest(term: string, lang: string, limit?: number): Promise<{ items: Suggestion[] }>;
  topic(uri: string, lang: string): Promise<TopicPage>;
}

export type View = "idle" | "results" | "topic";

export interface SessionError {
  message: string;
  /** re-runs the request that failed, with its original arguments */
  retry: () => Promise<void>;
}

export interface SessionState {
  lang: string;
  query: string;
  view: View;
  term: string | null;
  termLabel: string | null;
  candidates: AcItem[];
  hits: SearchHit[];
  total: number;
  suggestions: Suggestion[];
  topic: TopicPage | null;
  history: string[];
  error: SessionError | null;
}

export interface SessionOptions {
  lang?: string;
  /** where the language choice persists; defaults to window.localStorage */
  storage?: Pick<Storage, "getItem" | "setItem">;
}

const LANG_KEY = "topictrap.lang";

function defaultStorage(): Pick<Storage, "getItem" | "setItem"> | null {
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}

export class Session {
  private state: SessionState;
  private listeners: Array<(s: SessionState) => void> = [];
  private storage: Pick<Storage, "getItem" | "setItem"> | null;
  // monotonically increasing ticket; a response only lands if it still
  // holds the latest ticket, so out-of-order completions are discarded
  private acSeq = 0;

  constructor(private api: SearchApi, opts: SessionOptions = {}) {
    this.storage = opts.storage ?? defaultStorage();
    const stored = this.storage?.getItem(LANG_KEY) ?? null;
    this.state = {
      lang: opts.lang ?? stored ?? "en",
      query: "",
      view: "idle",
      term: null,
      termLabel: null,
      candidates: [],
      hits: [],
      total: 0,
      suggestions: [],
      topic: null,
      history: [],
      error: null,
    };
  }

  getState(): SessionState {
    return this.state;
  }

  subscribe(fn: (s: SessionState) => void): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  private fail(err: unknown, retry: () => Promise<void>): void {
    const message = err instanceof Error ? err.message : String(err);
    this.state = { ...this.state, error: { message, retry } };
    this.emit();
  }

  async setLang(lang: string): Promise<void> {
    if (lang === this.state.lang) return;
    this.state = { ...this.state, lang };
    this.storage?.setItem(LANG_KEY, lang);
    // labels and counts are language-independent but hit titles and lsa
    // edges are not, so refresh whatever is on screen
    if (this.state.view === "topic" && this.state.topic) {
      await this.openTopic(this.state.topic.uri);
    } else if (this.state.term) {
      await this.selectTerm(this.state.term, { push: false });
    } else {
      this.emit();
    }
  }

  async typeahead(q: string): Promise<void> {
    this.state = { ...this.state, query: q };
    const seq = ++this.acSeq;
    if (!q.trim()) {
      this.state = { ...this.state, candidates: [] };
      this.emit();
      return;
    }
    let items: AcItem[];
    try {
      ({ items } = await this.api.autocomplete(q, this.state.lang));
    } catch (err) {
      if (seq !== this.acSeq) return;
      this.fail(err, () => this.typeahead(q));
      return;
    }
    if (seq !== this.acSeq) return;
    this.state = { ...this.state, candidates: items, error: null };
    this.emit();
  }

  /** Search a term and load its suggestions; the chooser selection and
   * every suggestion chip funnel through here. */
  async selectTerm(uri: string, opts: { push?: boolean } = {}): Promise<void> {
    const push = opts.push ?? true;
    try {
      const [page, sugg] = await Promise.all([
        this.api.search({ term: uri, lang: this.state.lang }),
        this.api.suggest(uri, this.state.lang),
      ]);
      const history =
        push && this.state.term !== null && this.state.term !== uri
          ? [...this.state.history, this.state.term]
          : this.state.history;
      const label = labelFor(uri, this.state);
      this.acSeq++; // a landed navigation outranks any autocomplete in flight
      this.state = {
        ...this.state,
        view: "results",
        term: uri,
        termLabel: label,
        query: label,
        candidates: [],
        hits: page.hits,
        total: page.total,
        suggestions: sugg.items,
        topic: null,
        history,
        error: null,
      };
      this.emit();
    } catch (err) {
      this.fail(err, () => this.selectTerm(uri, opts));
    }
  }

  /** Free-text search; no term selected, so no suggestions are shown. */
  async searchWords(text: string): Promise<void> {
    try {
      const page = await this.api.search({ words: text, lang: this.state.lang });
      this.acSeq++;
      this.state = {
        ...this.state,
        view: "results",
        term: null,
        termLabel: null,
        candidates: [],
        hits: page.hits,
        total: page.total,
        suggestions: [],
        topic: null,
        error: null,
      };
      this.emit();
    } catch (err) {
      this.fail(err, () => this.searchWords(text));
    }
  }

  async back(): Promise<void> {
    const prev = this.state.history[this.state.history.length - 1];
    if (prev === undefined) return;
    this.state = { ...this.state, history: this.state.history.slice(0, -1) };
    await this.selectTerm(prev, { push: false });
  }

  async openTopic(uri: string): Promise<void> {
    try {
      const topic = await this.api.topic(uri, this.state.lang);
      this.state = { ...this.state, view: "topic", topic, error: null };
      this.emit();
    } catch (err) {
      this.fail(err, () => this.openTopic(uri));
    }
  }
}

function labelFor(uri: string, s: SessionState): string {
  const candidate = s.candidates.find((c) => c.uri === uri);
  if (candidate) return candidate.label;
  const suggestion = s.suggestions.find((c) => c.uri === uri);
  if (suggestion) return suggestion.label;
  const ref = s.topic
    ? [...s.topic.ancestors, ...s.topic.children].find((r) => r.uri === uri)
    : undefined;
  if (ref) return ref.label;
  return uri;
}
