import { ApiError } from "./api.js";
import type { WorkbenchApi } from "./api.js";
import {
  ENTITY_SLOT,
  formatScore,
  frameSlotCount,
  originBadge,
  parseEntities,
  parseReferences,
  sortByRank,
} from "./format.js";
import type { CreateSessionRequest, RankedReport, SessionRecord } from "./types.js";

const FORM_FIELDS = [
  ["source_lang", "Source language", "ja"],
  ["target_lang", "Target language", "en"],
  ["purpose", "Purpose of the translation", ""],
  ["target_audience", "Target audience", ""],
  ["target_locale", "Target locale (optional)", ""],
  ["register", "Register (optional)", ""],
  ["style_guide", "Style guide (optional)", ""],
] as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function sessionIdFromHash(): string | null {
  const match = /session=([0-9a-f]+)/.exec(window.location.hash);
  return match ? match[1]! : null;
}

export class Workbench {
  private record: SessionRecord | null = null;
  private creating = false;
  private selectionQueue: Promise<unknown> = Promise.resolve();
  private retryAction: (() => void) | null = null;

  private readonly form: HTMLFormElement;
  private readonly formError: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly bannerMessage: HTMLElement;
  private readonly reportSection: HTMLElement;
  private readonly sourceLine: HTMLElement;
  private readonly candidateRows: HTMLTableSectionElement;
  private readonly selectionStatus: HTMLElement;
  private readonly editInput: HTMLInputElement;
  private readonly frameInput: HTMLInputElement;
  private readonly entitiesInput: HTMLTextAreaElement;
  private readonly substitutionError: HTMLElement;
  private readonly subRows: HTMLTableSectionElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: WorkbenchApi,
  ) {
    root.replaceChildren();

    this.banner = el("div", "error-banner");
    this.banner.hidden = true;
    this.bannerMessage = el("span", "error-message");
    const retry = el("button", "retry-btn", "Retry");
    retry.type = "button";
    retry.addEventListener("click", () => this.retryAction?.());
    this.banner.append(this.bannerMessage, retry);

    this.form = this.buildForm();
    this.formError = el("div", "form-error");
    this.formError.hidden = true;
    this.form.append(this.formError);

    this.reportSection = el("section", "report");
    this.reportSection.hidden = true;
    this.sourceLine = el("div", "source-line");
    const table = el("table", "candidates");
    const head = el("thead");
    const headRow = el("tr");
    for (const title of ["Rank", "Origin", "Label", "Target sentence", "C.S.", ""]) {
      headRow.append(el("th", undefined, title));
    }
    head.append(headRow);
    this.candidateRows = el("tbody", "candidate-rows");
    table.append(head, this.candidateRows);
    this.selectionStatus = el("div", "selection-status");
    this.editInput = el("input", "edit-input");
    this.editInput.placeholder = "Edited text applied on select (optional)";
    this.reportSection.append(this.sourceLine, table, this.editInput, this.selectionStatus);

    const substitution = el("section", "substitution");
    this.frameInput = el("input", "frame-input");
    this.frameInput.placeholder = `Sentence frame with ${ENTITY_SLOT}`;
    this.entitiesInput = el("textarea", "entities-input");
    this.entitiesInput.placeholder = "One entity per line";
    const runButton = el("button", "run-substitution-btn", "Compare entities");
    runButton.type = "button";
    runButton.addEventListener("click", () => void this.runSubstitution());
    this.substitutionError = el("div", "substitution-error");
    this.substitutionError.hidden = true;
    const subTable = el("table", "substitutions");
    this.subRows = el("tbody", "sub-rows");
    subTable.append(this.subRows);
    substitution.append(
      el("h2", undefined, "Entity substitution"),
      this.frameInput,
      this.entitiesInput,
      runButton,
      this.substitutionError,
      subTable,
    );

    root.append(this.banner, this.form, this.reportSection, substitution);

    const restored = sessionIdFromHash();
    if (restored) void this.loadSession(restored);
  }

  private buildForm(): HTMLFormElement {
    const form = el("form", "spec-form");
    for (const [name, label, initial] of FORM_FIELDS) {
      const wrapper = el("label", `field field-${name}`, label);
      const input = el("input");
      input.name = name;
      input.value = initial;
      wrapper.append(input);
      form.append(wrapper);
    }
    const sourceLabel = el("label", "field field-source", "Source text");
    const source = el("textarea");
    source.name = "source";
    sourceLabel.append(source);

    const nLabel = el("label", "field field-n", "Candidates");
    const n = el("input");
    n.name = "n";
    n.type = "number";
    n.value = "3";
    nLabel.append(n);

    const refsLabel = el("label", "field field-references", "References (JSON, optional)");
    const references = el("textarea");
    references.name = "references";
    refsLabel.append(references);

    const submit = el("button", "generate-btn", "Generate translations");
    submit.type = "submit";

    form.append(sourceLabel, nLabel, refsLabel, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitSpecForm();
    });
    return form;
  }

  private fieldValue(name: string): string {
    const input = this.form.elements.namedItem(name) as
      | HTMLInputElement
      | HTMLTextAreaElement
      | null;
    return input ? input.value : "";
  }

  private showFormError(message: string): void {
    this.formError.textContent = message;
    this.formError.hidden = false;
  }

  private showBanner(message: string, retry: (() => void) | null): void {
    this.bannerMessage.textContent = message;
    this.retryAction = retry;
    this.banner.hidden = false;
  }

  private clearErrors(): void {
    this.formError.hidden = true;
    this.banner.hidden = true;
    this.retryAction = null;
  }

  async submitSpecForm(): Promise<void> {
    if (this.creating) return;
    this.clearErrors();

    const purpose = this.fieldValue("purpose").trim();
    const audience = this.fieldValue("target_audience").trim();
    const source = this.fieldValue("source").trim();
    if (!purpose) return this.showFormError("Purpose is required.");
    if (!audience) return this.showFormError("Target audience is required.");
    if (!source) return this.showFormError("Source text is required.");
    const n = Number.parseInt(this.fieldValue("n"), 10);
    if (!Number.isFinite(n) || n < 1 || n > 10) {
      return this.showFormError("Candidate count must be between 1 and 10.");
    }
    const references = parseReferences(this.fieldValue("references"));
    if (references === null) {
      return this.showFormError("References must be a JSON array of {label, text} objects.");
    }

    const body: CreateSessionRequest = {
      spec: {
        source_lang: this.fieldValue("source_lang").trim(),
        target_lang: this.fieldValue("target_lang").trim(),
        purpose,
        target_audience: audience,
        ...(this.fieldValue("target_locale").trim()
          ? { target_locale: this.fieldValue("target_locale").trim() }
          : {}),
        ...(this.fieldValue("register").trim()
          ? { register: this.fieldValue("register").trim() }
          : {}),
        ...(this.fieldValue("style_guide").trim()
          ? { style_guide: this.fieldValue("style_guide").trim() }
          : {}),
      },
      segment: { text: source },
      strategy: { kind: "spec_conditioned" },
      n,
      references,
    };

    this.creating = true;
    (this.form.querySelector(".generate-btn") as HTMLButtonElement).disabled = true;
    try {
      const record = await this.client.createSession(body);
      this.setRecord(record);
      window.location.hash = `session=${record.session_id}`;
    } catch (error) {
      this.showBanner(describe(error), () => void this.submitSpecForm());
    } finally {
      this.creating = false;
      (this.form.querySelector(".generate-btn") as HTMLButtonElement).disabled = false;
    }
  }

  async loadSession(sessionId: string): Promise<void> {
    try {
      this.setRecord(await this.client.getSession(sessionId));
    } catch (error) {
      this.showBanner(describe(error), () => void this.loadSession(sessionId));
    }
  }

  private setRecord(record: SessionRecord): void {
    this.record = record;
    this.renderReport();
  }

  private renderReport(): void {
    const record = this.record;
    if (!record) return;
    this.reportSection.hidden = false;
    this.sourceLine.textContent = `[source text] ${record.report.source}`;

    this.candidateRows.replaceChildren();
    for (const entry of sortByRank(record.report.entries)) {
      const row = el("tr", "candidate-row");
      row.dataset.label = entry.label;
      row.dataset.origin = entry.origin;
      if (record.selection?.label === entry.label) row.classList.add("selected");

      const selectButton = el("button", "select-btn", "Select");
      selectButton.type = "button";
      selectButton.addEventListener("click", () => {
        const edited = this.editInput.value.trim();
        void this.selectCandidate(entry.label, edited ? edited : undefined);
      });

      const cells = [
        el("td", "rank", String(entry.rank)),
        el("td", "origin-badge", originBadge(entry.origin)),
        el("td", "label", entry.label),
        el("td", "text", entry.text),
        el("td", "score", formatScore(entry.score, record.report.score_precision)),
      ];
      const actions = el("td");
      actions.append(selectButton);
      row.append(...cells, actions);
      this.candidateRows.append(row);
    }

    if (record.selection) {
      const edited = record.selection.edited_text ? " (edited)" : "";
      this.selectionStatus.textContent = `Selected: ${record.selection.label}${edited}`;
    } else {
      this.selectionStatus.textContent = "No selection yet.";
    }
  }

  /** Optimistic: the badge moves immediately and rolls back if the POST fails. */
  selectCandidate(label: string, editedText?: string): Promise<void> {
    const queued = this.selectionQueue.then(async () => {
      const record = this.record;
      if (!record) return;
      const snapshot = record;
      this.setRecord({
        ...record,
        selection: {
          label,
          edited_text: editedText ?? null,
          selected_at: new Date().toISOString(),
        },
      });
      try {
        this.setRecord(await this.client.selectCandidate(record.session_id, label, editedText));
        this.clearErrors();
      } catch (error) {
        this.setRecord(snapshot);
        this.showBanner(describe(error), null);
      }
    });
    this.selectionQueue = queued;
    return queued;
  }

  async runSubstitution(): Promise<void> {
    this.substitutionError.hidden = true;
    const frame = this.frameInput.value;
    const entities = parseEntities(this.entitiesInput.value);
    if (frameSlotCount(frame) !== 1) {
      this.substitutionError.textContent = `Frame must contain ${ENTITY_SLOT} exactly once.`;
      this.substitutionError.hidden = false;
      return;
    }
    if (entities.length === 0) {
      this.substitutionError.textContent = "Provide at least one entity.";
      this.substitutionError.hidden = false;
      return;
    }
    const source = this.fieldValue("source").trim() || (this.record?.segment.text ?? "");
    if (!source) {
      this.substitutionError.textContent = "Provide a source text first.";
      this.substitutionError.hidden = false;
      return;
    }
    try {
      this.renderSubstitution(await this.client.substitute(frame, entities, source));
      this.clearErrors();
    } catch (error) {
      this.showBanner(describe(error), () => void this.runSubstitution());
    }
  }

  private renderSubstitution(report: RankedReport): void {
    this.subRows.replaceChildren();
    for (const entry of sortByRank(report.entries)) {
      const row = el("tr", "sub-row");
      row.dataset.label = entry.label;
      row.append(
        el("td", "rank", String(entry.rank)),
        el("td", "label", entry.label),
        el("td", "text", entry.text),
        el("td", "score", formatScore(entry.score, report.score_precision)),
      );
      this.subRows.append(row);
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return String(error);
}

export function mountWorkbench(root: HTMLElement, client: WorkbenchApi): Workbench {
  return new Workbench(root, client);
}
