// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";
import type { FetchFn } from "../src/api";
import { createApp, parseHash } from "../src/ui";

type Route = (params: URLSearchParams) => unknown;

interface FakeNet {
  fetchFn: FetchFn;
  calls: string[];
  /** paths that throw a network error until the counter runs out */
  outages: Map<string, number>;
}

function fakeNet(routes: Record<string, Route>): FakeNet {
  const net: FakeNet = {
    calls: [],
    outages: new Map(),
    fetchFn: async (url) => {
      net.calls.push(url);
      const u = new URL(url, "http://fake");
      const left = net.outages.get(u.pathname) ?? 0;
      if (left > 0) {
        net.outages.set(u.pathname, left - 1);
        throw new TypeError("fetch failed");
      }
      const route = routes[u.pathname];
      if (!route) {
        return new Response(
          JSON.stringify({
            error: { category: "UNKNOWN_TERM", message: `no route for ${u.pathname}` },
          }),
          { status: 404 },
        );
      }
      return new Response(JSON.stringify(route(u.searchParams)), { status: 200 });
    },
  };
  return net;
}

const AC_ITEMS = [
  { uri: "circle", kind: "topic", label: "Circle", label_lang: "en", count: 7 },
  { uri: "circumcircle", kind: "topic", label: "Circumcircle", label_lang: "en", count: 2 },
  {
    uri: "comp_construct_circumcircle", kind: "competency",
    label: "Construct a circumcircle", label_lang: "en", count: 5,
  },
];

function hit(id: string, title: string, kinds: string[]) {
  return { resource_id: id, title, score: 1.0, match_kinds: kinds, matched_terms: [] };
}

const PAGES: Record<string, unknown> = {
  circle: {
    total: 7, offset: 0, limit: 10,
    hits: [
      hit("r01", "Drawing circles", ["direct_term"]),
      hit("r04", "Circumcircle worksheet", ["descendant_topic"]),
    ],
  },
  circumcircle: {
    total: 2, offset: 0, limit: 10,
    hits: [hit("r04", "Circumcircle worksheet", ["direct_term"])],
  },
  pie_chart: {
    total: 3, offset: 0, limit: 10,
    hits: [hit("r30", "Pie charts in class", ["direct_term"])],
  },
  circular_diagram: {
    total: 4, offset: 0, limit: 10,
    hits: [hit("r31", "Reading circular diagrams", ["direct_term"])],
  },
  hyperbola: { total: 0, offset: 0, limit: 10, hits: [] },
};

const SUGGESTS: Record<string, unknown[]> = {
  circle: [
    { uri: "circumcircle", label: "Circumcircle", kind: "policy_child", similarity: 0.9, count: 2 },
  ],
  circumcircle: [
    { uri: "circle", label: "Circle", kind: "policy_parent", similarity: 0.9, count: 7 },
  ],
  pie_chart: [
    { uri: "circular_diagram", label: "Circular diagram", kind: "manual", similarity: 1.0, count: 4 },
  ],
  circular_diagram: [],
  hyperbola: [],
};

const TOPICS: Record<string, unknown> = {
  pie_chart: {
    uri: "pie_chart",
    kind: "topic",
    count: 3,
    labels: [
      { lang: "de", text: "Kreisdiagramm", preferred: true },
      { lang: "en", text: "Pie chart", preferred: true },
    ],
    ancestors: [{ uri: "circular_diagram", label: "Circular diagram", count: 4 }],
    children: [],
    relatives: [
      { uri: "circular_diagram", label: "Circular diagram", kind: "manual", similarity: 1.0, count: 4 },
    ],
  },
};

function routes(): Record<string, Route> {
  const table: Record<string, Route> = {
    "/api/autocomplete": (p) => {
      const q = (p.get("q") ?? "").toLowerCase();
      return { items: AC_ITEMS.filter((i) => i.label.toLowerCase().startsWith(q)) };
    },
    "/api/search": (p) => {
      const found = PAGES[p.get("term") ?? ""];
      if (!found) throw new Error(`no page for ${p.get("term")}`);
      return found;
    },
    "/api/suggest": (p) => ({ items: SUGGESTS[p.get("term") ?? ""] ?? [] }),
  };
  for (const [uri, topic] of Object.entries(TOPICS)) {
    table[`/api/topic/${uri}`] = () => topic;
  }
  return table;
}

function mount(net: FakeNet) {
  document.body.innerHTML = '<div id="app"></div>';
  const app = createApp(document.getElementById("app")!, {
    fetchFn: net.fetchFn,
    debounceMs: 0,
    lang: "en",
  });
  return app;
}

async function type(input: HTMLInputElement, text: string) {
  input.focus();
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

const candidateRows = () =>
  Array.from(document.querySelectorAll<HTMLElement>(".tt-candidate"));
const chipButtons = () =>
  Array.from(document.querySelectorAll<HTMLElement>(".tt-chip"));
const totalEl = () => document.querySelector<HTMLElement>(".tt-total");

beforeEach(() => {
  document.body.innerHTML = "";
  location.hash = "";
  localStorage.clear();
});

describe("chooser", () => {
  it("shows candidates grouped by kind with badges and counts", async () => {
    const app = mount(fakeNet(routes()));
    await type(app.input, "c");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBe(3);
    });
    const groups = Array.from(document.querySelectorAll(".tt-group")).map(
      (g) => g.textContent,
    );
    expect(groups).toEqual(["topic", "competency"]);
    const first = candidateRows()[0]!;
    expect(first.querySelector(".tt-label")!.textContent).toBe("Circle");
    expect(first.querySelector(".tt-badge")!.textContent).toBe("topic");
    expect(first.querySelector(".tt-count")!.textContent).toBe("7");
  });

  it("collapses rapid keystrokes into one request", async () => {
    const net = fakeNet(routes());
    document.body.innerHTML = '<div id="app"></div>';
    const app = createApp(document.getElementById("app")!, {
      fetchFn: net.fetchFn,
      debounceMs: 30,
      lang: "en",
    });
    await type(app.input, "c");
    await type(app.input, "ci");
    await type(app.input, "cir");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBeGreaterThan(0);
    });
    expect(net.calls.filter((u) => u.includes("/api/autocomplete"))).toHaveLength(1);
    expect(net.calls[0]).toContain("q=cir");
  });

  it("clearing the input hides the list without another request", async () => {
    const net = fakeNet(routes());
    const app = mount(net);
    await type(app.input, "circle");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBe(1);
    });
    const before = net.calls.length;
    await type(app.input, "");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBe(0);
    });
    expect(net.calls.length).toBe(before);
  });
});

describe("results view", () => {
  it("renders total, hits with match markers, and labeled chips", async () => {
    const app = mount(fakeNet(routes()));
    await type(app.input, "circle");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBe(1);
    });
    candidateRows()[0]!.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
    await vi.waitFor(() => {
      expect(document.querySelector(".tt-results")).toBeTruthy();
    });

    expect(totalEl()!.dataset.total).toBe("7");
    expect(totalEl()!.textContent).toBe("7 resources");
    const markers = Array.from(document.querySelectorAll(".tt-match")).map(
      (m) => m.textContent,
    );
    expect(markers).toEqual(["direct", "more specific"]);
    expect(document.querySelector(".tt-match-direct")).toBeTruthy();
    expect(document.querySelector(".tt-match-expanded")).toBeTruthy();

    const chips = chipButtons();
    expect(chips).toHaveLength(1);
    expect(chips[0]!.textContent).toBe("Circumcircle (2)");
    expect(chips[0]!.dataset.count).toBe("2");
    // the chooser closed on landing
    expect(candidateRows()).toHaveLength(0);
  });

  it("chip click navigates, replaces the query, and back returns", async () => {
    const app = mount(fakeNet(routes()));
    await type(app.input, "circle");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBe(1);
    });
    candidateRows()[0]!.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
    await vi.waitFor(() => {
      expect(totalEl()?.dataset.total).toBe("7");
    });

    chipButtons()[0]!.click();
    await vi.waitFor(() => {
      expect(totalEl()?.dataset.total).toBe("2");
    });
    expect(location.hash).toBe("#/term/circumcircle");
    expect(app.input.value).toBe("Circumcircle");
    expect(app.session.getState().history).toEqual(["circle"]);

    const back = document.querySelector<HTMLButtonElement>(".tt-back")!;
    expect(back.disabled).toBe(false);
    back.click();
    await vi.waitFor(() => {
      expect(totalEl()?.dataset.total).toBe("7");
    });
    expect(app.session.getState().term).toBe("circle");
    expect(back.disabled).toBe(true);
  });

  it("keeps state and offers retry on a network failure", async () => {
    const net = fakeNet(routes());
    const app = mount(net);
    await type(app.input, "circle");
    await vi.waitFor(() => {
      expect(candidateRows().length).toBe(1);
    });

    net.outages.set("/api/search", 1);
    candidateRows()[0]!.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
    await vi.waitFor(() => {
      expect(document.querySelector(".tt-error-message")).toBeTruthy();
    });
    expect(document.querySelector(".tt-error-message")!.textContent).toMatch(
      /fetch failed/,
    );
    // the candidate list survived the failure
    expect(candidateRows().length).toBe(1);

    document.querySelector<HTMLButtonElement>(".tt-retry")!.click();
    await vi.waitFor(() => {
      expect(document.querySelector(".tt-results")).toBeTruthy();
    });
    expect(document.querySelector(".tt-error-message")).toBeNull();
    expect(totalEl()!.dataset.total).toBe("7");
  });
});

describe("topic panel", () => {
  it("renders labels, hierarchy, and linked relatives with provenance", async () => {
    const app = mount(fakeNet(routes()));
    await app.session.openTopic("pie_chart");
    await vi.waitFor(() => {
      expect(document.querySelector(".tt-topic")).toBeTruthy();
    });

    const dl = document.querySelector(".tt-labels")!;
    expect(dl.textContent).toContain("Kreisdiagramm");
    expect(dl.textContent).toContain("Pie chart");

    const broader = document.querySelectorAll<HTMLElement>(".tt-refs")[0]!;
    const link = broader.querySelector<HTMLElement>(".tt-term-link")!;
    expect(link.textContent).toBe("Circular diagram (4)");

    const relative = document.querySelector(".tt-relative")!;
    expect(relative.querySelector(".tt-provenance")!.textContent).toBe("manual");
    expect(location.hash).toBe("#/topic/pie_chart");

    (relative.querySelector(".tt-term-link") as HTMLElement).click();
    await vi.waitFor(() => {
      expect(document.querySelector(".tt-results")).toBeTruthy();
    });
    expect(totalEl()!.dataset.total).toBe("4");
    expect(location.hash).toBe("#/term/circular_diagram");
  });
});

describe("hash routing", () => {
  it("parses term and topic fragments", () => {
    expect(parseHash("#/term/circle")).toEqual({ kind: "term", uri: "circle" });
    expect(parseHash("#/topic/a%2Fb")).toEqual({ kind: "topic", uri: "a/b" });
    expect(parseHash("#nope")).toBeNull();
    expect(parseHash("")).toBeNull();
  });

  it("boots straight into a deep-linked term", async () => {
    location.hash = "#/term/circle";
    mount(fakeNet(routes()));
    await vi.waitFor(() => {
      expect(totalEl()?.dataset.total).toBe("7");
    });
  });

  it("a zero-count term stays reachable by manual URL only", async () => {
    location.hash = "#/term/hyperbola";
    mount(fakeNet(routes()));
    await vi.waitFor(() => {
      expect(totalEl()?.dataset.total).toBe("0");
    });
    expect(document.querySelectorAll(".tt-hit")).toHaveLength(0);
  });
});
