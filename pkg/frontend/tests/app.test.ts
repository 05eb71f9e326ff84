import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiError } from "../src/api.js";
import { mountWorkbench } from "../src/app.js";
import type { RankedReport, SessionRecord } from "../src/types.js";

function makeRecord(overrides: Partial<SessionRecord> = {}): SessionRecord {
  return {
    session_id: "ab12".repeat(8),
    created_at: "2026-08-14T00:00:00+00:00",
    spec: { source_lang: "ja", target_lang: "en", purpose: "p", target_audience: "aud" },
    segment: { id: "seg-1", text: "source sentence" },
    strategy: { kind: "spec_conditioned" },
    candidates: [],
    report: {
      source: "source sentence",
      entries: [
        { label: "v1", text: "first", origin: "generated", score: 0.8701, rank: 2 },
        { label: "DL", text: "reference text", origin: "reference", score: 0.91, rank: 1 },
        { label: "v2", text: "second", origin: "generated", score: 0.752, rank: 3 },
      ],
      embed_model: "embedder",
      score_precision: 3,
    },
    selection: null,
    selection_history: [],
    provider_meta: { chat_model: "chat", embed_model: "embedder", mode: "replay" },
    ...overrides,
  };
}

function makeClient() {
  return {
    createSession: vi.fn(),
    getSession: vi.fn(),
    selectCandidate: vi.fn(),
    substitute: vi.fn(),
  };
}

function setField(root: HTMLElement, name: string, value: string): void {
  const form = root.querySelector("form.spec-form") as HTMLFormElement;
  const input = form.elements.namedItem(name) as HTMLInputElement;
  input.value = value;
}

function fillValidForm(root: HTMLElement): void {
  setField(root, "purpose", "Explain the idiom naturally.");
  setField(root, "target_audience", "General readers");
  setField(root, "source", "source sentence");
}

function submit(root: HTMLElement): void {
  const form = root.querySelector("form.spec-form") as HTMLFormElement;
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}

async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

let root: HTMLElement;

beforeEach(() => {
  window.location.hash = "";
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.append(root);
});

describe("spec form", () => {
  it("renders candidates sorted by rank with badges and printed scores", async () => {
    const client = makeClient();
    client.createSession.mockResolvedValue(makeRecord());
    mountWorkbench(root, client);

    fillValidForm(root);
    submit(root);
    await flush();

    const rows = [...root.querySelectorAll("tr.candidate-row")] as HTMLElement[];
    expect(rows.map((row) => row.dataset.label)).toEqual(["DL", "v1", "v2"]);
    expect(rows.map((row) => row.querySelector(".rank")!.textContent)).toEqual(["1", "2", "3"]);
    expect(rows.map((row) => row.querySelector(".origin-badge")!.textContent)).toEqual([
      "REF",
      "GEN",
      "GEN",
    ]);
    expect(rows.map((row) => row.querySelector(".score")!.textContent)).toEqual([
      "0.910",
      "0.870",
      "0.752",
    ]);
    expect(root.querySelector(".source-line")!.textContent).toBe("[source text] source sentence");
    expect(window.location.hash).toContain(`session=${"ab12".repeat(8)}`);
  });

  it("rejects an empty purpose inline without touching the network", async () => {
    const client = makeClient();
    mountWorkbench(root, client);

    setField(root, "target_audience", "General readers");
    setField(root, "source", "text");
    submit(root);
    await flush();

    const error = root.querySelector(".form-error") as HTMLElement;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain("Purpose");
    expect(client.createSession).not.toHaveBeenCalled();
  });

  it("rejects malformed references JSON inline", async () => {
    const client = makeClient();
    mountWorkbench(root, client);

    fillValidForm(root);
    setField(root, "references", "not json");
    submit(root);
    await flush();

    expect((root.querySelector(".form-error") as HTMLElement).hidden).toBe(false);
    expect(client.createSession).not.toHaveBeenCalled();
  });

  it("shows a retryable banner when the provider fails", async () => {
    const client = makeClient();
    client.createSession
      .mockRejectedValueOnce(new ApiError(502, "provider.fixture_miss", "no fixture"))
      .mockResolvedValueOnce(makeRecord());
    mountWorkbench(root, client);

    fillValidForm(root);
    submit(root);
    await flush();

    const banner = root.querySelector(".error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.querySelector(".error-message")!.textContent).toContain("provider.fixture_miss");
    expect(root.querySelectorAll("tr.candidate-row")).toHaveLength(0);

    (banner.querySelector(".retry-btn") as HTMLButtonElement).click();
    await flush();

    expect(client.createSession).toHaveBeenCalledTimes(2);
    expect(root.querySelectorAll("tr.candidate-row")).toHaveLength(3);
    expect(banner.hidden).toBe(true);
  });
});

describe("candidate selection", () => {
  it("applies the selection optimistically and keeps the server record", async () => {
    const client = makeClient();
    client.createSession.mockResolvedValue(makeRecord());
    let resolveSelect!: (record: SessionRecord) => void;
    client.selectCandidate.mockReturnValue(
      new Promise<SessionRecord>((resolve) => {
        resolveSelect = resolve;
      }),
    );
    mountWorkbench(root, client);
    fillValidForm(root);
    submit(root);
    await flush();

    const row = root.querySelector('tr.candidate-row[data-label="v2"]') as HTMLElement;
    (row.querySelector(".select-btn") as HTMLButtonElement).click();
    await flush();

    expect(
      (root.querySelector('tr.candidate-row[data-label="v2"]') as HTMLElement).classList.contains(
        "selected",
      ),
    ).toBe(true);
    expect(root.querySelector(".selection-status")!.textContent).toBe("Selected: v2");

    resolveSelect(
      makeRecord({
        selection: { label: "v2", edited_text: "polished", selected_at: "2026-08-14T01:00:00Z" },
      }),
    );
    await flush();

    expect(client.selectCandidate).toHaveBeenCalledWith("ab12".repeat(8), "v2", undefined);
    expect(root.querySelector(".selection-status")!.textContent).toBe("Selected: v2 (edited)");
  });

  it("rolls back when the backend rejects the label", async () => {
    const client = makeClient();
    client.createSession.mockResolvedValue(
      makeRecord({
        selection: { label: "DL", edited_text: null, selected_at: "2026-08-14T00:30:00Z" },
      }),
    );
    client.selectCandidate.mockRejectedValue(
      new ApiError(422, "selection.unknown_label", "no candidate v9"),
    );
    mountWorkbench(root, client);
    fillValidForm(root);
    submit(root);
    await flush();

    const row = root.querySelector('tr.candidate-row[data-label="v1"]') as HTMLElement;
    (row.querySelector(".select-btn") as HTMLButtonElement).click();
    await flush();

    const selected = [...root.querySelectorAll("tr.candidate-row.selected")] as HTMLElement[];
    expect(selected.map((r) => r.dataset.label)).toEqual(["DL"]);
    expect(root.querySelector(".selection-status")!.textContent).toBe("Selected: DL");
    const banner = root.querySelector(".error-banner") as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(banner.querySelector(".error-message")!.textContent).toContain(
      "selection.unknown_label",
    );
  });
});

describe("substitution panel", () => {
  it("requires exactly one slot before calling the backend", async () => {
    const client = makeClient();
    mountWorkbench(root, client);

    (root.querySelector(".frame-input") as HTMLInputElement).value = "no slot here";
    (root.querySelector(".entities-input") as HTMLTextAreaElement).value = "Hibari Misora";
    (root.querySelector(".run-substitution-btn") as HTMLButtonElement).click();
    await flush();

    const error = root.querySelector(".substitution-error") as HTMLElement;
    expect(error.hidden).toBe(false);
    expect(error.textContent).toContain("{ENTITY}");
    expect(client.substitute).not.toHaveBeenCalled();
  });

  it("renders ranked entity rows", async () => {
    const report: RankedReport = {
      source: "source sentence",
      entries: [
        { label: "Judy Garland", text: "Voice of Judy Garland.", origin: "generated", score: 0.826, rank: 3 },
        { label: "Hibari Misora", text: "Voice of Hibari Misora.", origin: "generated", score: 0.8764, rank: 1 },
        { label: "Ella Fitzgerald", text: "Voice of Ella Fitzgerald.", origin: "generated", score: 0.8331, rank: 2 },
      ],
      embed_model: "embedder",
      score_precision: 3,
    };
    const client = makeClient();
    client.substitute.mockResolvedValue(report);
    mountWorkbench(root, client);

    setField(root, "source", "source sentence");
    (root.querySelector(".frame-input") as HTMLInputElement).value = "Voice of {ENTITY}.";
    (root.querySelector(".entities-input") as HTMLTextAreaElement).value =
      "Judy Garland\nHibari Misora\nElla Fitzgerald";
    (root.querySelector(".run-substitution-btn") as HTMLButtonElement).click();
    await flush();

    expect(client.substitute).toHaveBeenCalledWith(
      "Voice of {ENTITY}.",
      ["Judy Garland", "Hibari Misora", "Ella Fitzgerald"],
      "source sentence",
    );
    const rows = [...root.querySelectorAll("tr.sub-row")] as HTMLElement[];
    expect(rows.map((r) => r.dataset.label)).toEqual([
      "Hibari Misora",
      "Ella Fitzgerald",
      "Judy Garland",
    ]);
    expect(rows.map((r) => r.querySelector(".score")!.textContent)).toEqual([
      "0.876",
      "0.833",
      "0.826",
    ]);
  });
});

it("restores the session referenced in the location hash on mount", async () => {
  const client = makeClient();
  client.getSession.mockResolvedValue(makeRecord());
  window.location.hash = `#session=${"ab12".repeat(8)}`;

  mountWorkbench(root, client);
  await flush();

  expect(client.getSession).toHaveBeenCalledWith("ab12".repeat(8));
  expect(root.querySelectorAll("tr.candidate-row")).toHaveLength(3);
});
