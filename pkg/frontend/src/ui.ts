/** DOM layer: renders the session state and wires input events.
 *
 * One createApp call builds the whole page inside the given root:
 * a search box with a debounced chooser, the result list with its
 * suggestion chips, and the topic panel. Term navigation also lands in
 * location.hash so a result page can be linked to directly.
 */

import type { AcItem, FetchFn, SearchHit, Suggestion, TermRef } from "./api";
import { ApiClient } from "./api";
import type { SessionState } from "./session";
import { Session } from "./session";

export interface AppOptions {
  baseUrl?: string;
  fetchFn?: FetchFn;
  languages?: string[];
  debounceMs?: number;
  lang?: string;
  storage?: Pick<Storage, "getItem" | "setItem">;
}

export interface App {
  root: HTMLElement;
  session: Session;
  input: HTMLInputElement;
}

const KIND_ORDER = ["topic", "competency", "process", "level"] as const;

export function createApp(root: HTMLElement, opts: AppOptions = {}): App {
  const api = new ApiClient(opts.baseUrl ?? "", opts.fetchFn);
  const session = new Session(api, { lang: opts.lang, storage: opts.storage });
  const debounceMs = opts.debounceMs ?? 150;
  const languages = opts.languages ?? ["en", "fr", "de"];

  root.classList.add("tt-app");
  root.innerHTML = "";

  const header = el("header", "tt-header");
  const backBtn = el("button", "tt-back");
  backBtn.textContent = "← back";
  const input = el("input", "tt-input");
  input.type = "search";
  input.placeholder = "Search topics, competencies, levels…";
  input.autocomplete = "off";
  const langSel = el("select", "tt-lang");
  for (const lang of languages) {
    const option = el("option", "");
    option.value = lang;
    option.textContent = lang;
    langSel.appendChild(option);
  }
  header.append(backBtn, input, langSel);

  const chooser = el("ul", "tt-chooser");
  const errorBar = el("div", "tt-error");
  const main = el("main", "tt-main");
  root.append(header, chooser, errorBar, main);

  let timer: ReturnType<typeof setTimeout> | undefined;
  input.addEventListener("input", () => {
    clearTimeout(timer);
    const q = input.value;
    timer = setTimeout(() => void session.typeahead(q), debounceMs);
  });
  input.addEventListener("keydown", (ev) => {
    const rows = Array.from(
      chooser.querySelectorAll<HTMLElement>(".tt-candidate"),
    );
    if (ev.key === "ArrowDown" || ev.key === "ArrowUp") {
      if (!rows.length) return;
      ev.preventDefault();
      const step = ev.key === "ArrowDown" ? 1 : -1;
      const at = rows.findIndex((r) => r.classList.contains("active"));
      const next = (at + step + rows.length) % rows.length;
      rows.forEach((r, i) => r.classList.toggle("active", i === next));
    } else if (ev.key === "Enter") {
      ev.preventDefault();
      const active = rows.find((r) => r.classList.contains("active")) ?? rows[0];
      if (active?.dataset.uri) {
        void session.selectTerm(active.dataset.uri);
      } else if (input.value.trim()) {
        void session.searchWords(input.value);
      }
    } else if (ev.key === "Escape") {
      chooser.innerHTML = "";
    }
  });

  backBtn.addEventListener("click", () => void session.back());
  langSel.addEventListener("change", () => void session.setLang(langSel.value));

  session.subscribe((s) => render(s));

  // navigation rewrites the box even mid-focus; typeahead renders must not
  // clobber keystrokes newer than the response
  let renderedTerm: string | null = null;
  let renderedView: SessionState["view"] = "idle";
  function render(s: SessionState): void {
    langSel.value = s.lang;
    backBtn.disabled = s.history.length === 0;
    const navigated = s.term !== renderedTerm || s.view !== renderedView;
    renderedTerm = s.term;
    renderedView = s.view;
    if (navigated || document.activeElement !== input) input.value = s.query;
    renderError(errorBar, s);
    renderChooser(chooser, s, session);
    renderMain(main, s, session);
    syncHash(s);
  }

  render(session.getState());
  const target = parseHash(location.hash);
  if (target?.kind === "term") void session.selectTerm(target.uri, { push: false });
  if (target?.kind === "topic") void session.openTopic(target.uri);

  return { root, session, input };
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  return node;
}

function renderError(bar: HTMLElement, s: SessionState): void {
  bar.innerHTML = "";
  if (!s.error) return;
  const note = el("span", "tt-error-message");
  note.textContent = `Request failed: ${s.error.message}`;
  const retry = el("button", "tt-retry");
  retry.textContent = "retry";
  const attempt = s.error.retry;
  retry.addEventListener("click", () => void attempt());
  bar.append(note, retry);
}

function renderChooser(list: HTMLElement, s: SessionState, session: Session): void {
  list.innerHTML = "";
  if (!s.candidates.length) return;
  for (const kind of KIND_ORDER) {
    const group = s.candidates.filter((c) => c.kind === kind);
    if (!group.length) continue;
    const headerRow = el("li", "tt-group");
    headerRow.textContent = kind;
    list.appendChild(headerRow);
    for (const item of group) list.appendChild(candidateRow(item, session));
  }
}

function candidateRow(item: AcItem, session: Session): HTMLElement {
  const row = el("li", "tt-candidate");
  row.dataset.uri = item.uri;
  const label = el("span", "tt-label");
  label.textContent = item.label;
  const badge = el("span", `tt-badge tt-badge-${item.kind}`);
  badge.textContent = item.kind;
  const count = el("span", "tt-count");
  count.textContent = String(item.count);
  row.append(label, badge, count);
  // mousedown beats the input's blur, like every typeahead does it
  row.addEventListener("mousedown", (ev) => {
    ev.preventDefault();
    void session.selectTerm(item.uri);
  });
  return row;
}

function renderMain(main: HTMLElement, s: SessionState, session: Session): void {
  main.innerHTML = "";
  if (s.view === "results") main.appendChild(resultsView(s, session));
  if (s.view === "topic" && s.topic) main.appendChild(topicPanel(s, session));
}

function resultsView(s: SessionState, session: Session): HTMLElement {
  const section = el("section", "tt-results");

  const heading = el("h2", "tt-heading");
  if (s.term) {
    heading.textContent = s.termLabel ?? s.term;
    const details = el("a", "tt-topic-link");
    details.href = `#/topic/${encodeURIComponent(s.term)}`;
    details.textContent = "topic page";
    const uri = s.term;
    details.addEventListener("click", (ev) => {
      ev.preventDefault();
      void session.openTopic(uri);
    });
    heading.appendChild(details);
  } else {
    heading.textContent = `“${s.query}”`;
  }
  section.appendChild(heading);

  const total = el("p", "tt-total");
  total.dataset.total = String(s.total);
  total.textContent =
    s.total === 1 ? "1 resource" : `${s.total} resources`;
  section.appendChild(total);

  const hits = el("ol", "tt-hits");
  for (const hit of s.hits) hits.appendChild(hitRow(hit));
  section.appendChild(hits);

  if (s.suggestions.length) {
    const chipsHeading = el("h3", "tt-chips-heading");
    chipsHeading.textContent = "Related searches";
    const chips = el("div", "tt-chips");
    for (const sugg of s.suggestions) chips.appendChild(chip(sugg, session));
    section.append(chipsHeading, chips);
  }
  return section;
}

function hitRow(hit: SearchHit): HTMLElement {
  const row = el("li", "tt-hit");
  row.dataset.resourceId = hit.resource_id;
  const title = el("span", "tt-hit-title");
  title.textContent = hit.title;
  row.appendChild(title);
  for (const kind of hit.match_kinds) {
    const direct = kind === "direct_term" || kind === "level_exact";
    const mark = el("span", `tt-match ${direct ? "tt-match-direct" : "tt-match-expanded"}`);
    mark.textContent = matchLabel(kind);
    row.appendChild(mark);
  }
  return row;
}

function matchLabel(kind: string): string {
  switch (kind) {
    case "direct_term":
      return "direct";
    case "descendant_topic":
      return "more specific";
    case "ingredient_match":
      return "ingredient";
    case "level_exact":
      return "level";
    case "word_match":
      return "words";
    default:
      return kind;
  }
}

function chip(sugg: Suggestion, session: Session): HTMLElement {
  const button = el("button", "tt-chip");
  button.dataset.uri = sugg.uri;
  button.dataset.count = String(sugg.count);
  button.dataset.kind = sugg.kind;
  button.textContent = `${sugg.label} (${sugg.count})`;
  button.title = `${sugg.kind}, similarity ${sugg.similarity.toFixed(2)}`;
  button.addEventListener("click", () => void session.selectTerm(sugg.uri));
  return button;
}

function topicPanel(s: SessionState, session: Session): HTMLElement {
  const topic = s.topic!;
  const panel = el("aside", "tt-topic");

  const heading = el("h2", "tt-heading");
  heading.textContent = preferredLabel(topic.labels, s.lang) ?? topic.uri;
  const badge = el("span", `tt-badge tt-badge-${topic.kind}`);
  badge.textContent = topic.kind;
  heading.appendChild(badge);
  panel.appendChild(heading);

  const count = el("p", "tt-total");
  count.dataset.total = String(topic.count);
  count.appendChild(
    termLink({ uri: topic.uri, label: "search", count: topic.count }, session, false),
  );
  count.append(` → ${topic.count} resource${topic.count === 1 ? "" : "s"}`);
  panel.appendChild(count);

  const labels = el("dl", "tt-labels");
  for (const row of topic.labels) {
    const dt = el("dt", "");
    dt.textContent = row.lang;
    const dd = el("dd", row.preferred ? "tt-label-preferred" : "");
    dd.textContent = row.text;
    labels.append(dt, dd);
  }
  panel.appendChild(labels);

  panel.appendChild(refList("Broader", topic.ancestors, session));
  panel.appendChild(refList("Narrower", topic.children, session));

  const relHeading = el("h3", "tt-section-heading");
  relHeading.textContent = "Related";
  panel.appendChild(relHeading);
  const relatives = el("ul", "tt-relatives");
  for (const rel of topic.relatives) {
    const row = el("li", "tt-relative");
    row.appendChild(termLink(rel, session, true));
    const provenance = el("span", "tt-provenance");
    provenance.textContent = rel.kind;
    row.appendChild(provenance);
    relatives.appendChild(row);
  }
  panel.appendChild(relatives);
  return panel;
}

function refList(title: string, refs: TermRef[], session: Session): HTMLElement {
  const wrap = el("div", "tt-refs");
  const heading = el("h3", "tt-section-heading");
  heading.textContent = title;
  wrap.appendChild(heading);
  const list = el("ul", "tt-ref-list");
  if (!refs.length) {
    const none = el("li", "tt-none");
    none.textContent = "none";
    list.appendChild(none);
  }
  for (const ref of refs) {
    const row = el("li", "");
    row.appendChild(termLink(ref, session, true));
    list.appendChild(row);
  }
  wrap.appendChild(list);
  return wrap;
}

/** Every mention of a term is a hyperlink to its search. */
function termLink(
  ref: { uri: string; label: string; count: number },
  session: Session,
  withCount: boolean,
): HTMLElement {
  const link = el("a", "tt-term-link");
  link.href = `#/term/${encodeURIComponent(ref.uri)}`;
  link.dataset.uri = ref.uri;
  link.dataset.count = String(ref.count);
  link.textContent = withCount ? `${ref.label} (${ref.count})` : ref.label;
  link.addEventListener("click", (ev) => {
    ev.preventDefault();
    void session.selectTerm(ref.uri);
  });
  return link;
}

function preferredLabel(
  labels: { lang: string; text: string; preferred: boolean }[],
  lang: string,
): string | undefined {
  const own = labels.find((l) => l.lang === lang && l.preferred);
  return (own ?? labels.find((l) => l.preferred) ?? labels[0])?.text;
}

interface HashTarget {
  kind: "term" | "topic";
  uri: string;
}

export function parseHash(hash: string): HashTarget | null {
  const m = /^#\/(term|topic)\/(.+)$/.exec(hash);
  if (!m) return null;
  return { kind: m[1] as "term" | "topic", uri: decodeURIComponent(m[2]!) };
}

function syncHash(s: SessionState): void {
  let next = "";
  if (s.view === "topic" && s.topic) {
    next = `#/topic/${encodeURIComponent(s.topic.uri)}`;
  } else if (s.view === "results" && s.term) {
    next = `#/term/${encodeURIComponent(s.term)}`;
  }
  if (next && location.hash !== next) location.hash = next;
}
