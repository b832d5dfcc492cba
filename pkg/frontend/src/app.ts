// Browser bootstrap: shelves, slice view, recommendation cards.

import { ApiClient } from "./api.js";
import { Explorer } from "./explorer.js";
import { EditorError, type EditorAction } from "./editor.js";
import { renderModel } from "./render.js";
import { describeSpec } from "./spec.js";
import type { RecommendationDocument, SchemaDocument } from "./types.js";

const TASK = new URLSearchParams(location.search).get("task") ?? "task-1";
const DATASET = new URLSearchParams(location.search).get("dataset") ?? "Earthquakes";

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

function option(value: string): HTMLOptionElement {
  const node = document.createElement("option");
  node.value = value;
  node.textContent = value;
  return node;
}

class ExplorerView {
  private explorer: Explorer;
  private schema: SchemaDocument | null;
  private status: HTMLElement;
  private specLine: HTMLElement;
  private sliceHost: HTMLElement;
  private cardsHost: HTMLElement;

  constructor(root: HTMLElement, explorer: Explorer, schema: SchemaDocument | null) {
    this.explorer = explorer;
    this.schema = schema;
    root.replaceChildren();

    const editor = el("section", "editor");
    editor.appendChild(this.fieldPicker());
    this.specLine = el("p", "spec-line", describeSpec(explorer.currentSpec));
    editor.appendChild(this.specLine);
    this.status = el("p", "status");
    editor.appendChild(this.status);

    const actions = el("div", "actions");
    const evalButton = el("button", "primary", "Evaluate slice");
    evalButton.onclick = () => void this.refreshSlice();
    const recButton = el("button", "primary", "Recommend next slices");
    recButton.onclick = () => void this.refreshRecommendations();
    actions.append(evalButton, recButton);
    editor.appendChild(actions);

    this.sliceHost = el("section", "slice");
    this.cardsHost = el("section", "cards");
    root.append(editor, this.sliceHost, this.cardsHost);
  }

  private fields(): string[] {
    const base = this.schema?.columns.map((c) => c.name) ?? [];
    const aggregates = this.schema
      ? this.schema.columns
          .filter((c) => (c.type === "int" || c.type === "float") && c.role === "measure")
          .flatMap((c) => ["AVG", "SUM", "MIN", "MAX"].map((a) => `${a}(${c.name})`))
      : [];
    return [...base, ...aggregates];
  }

  private fieldPicker(): HTMLElement {
    const panel = el("div", "shelves");
    const select = document.createElement("select");
    for (const field of this.fields()) select.appendChild(option(field));

    const addTo = (label: string, make: (field: string) => EditorAction) => {
      const button = el("button", undefined, label);
      button.onclick = () => this.apply(make(select.value));
      return button;
    };
    panel.append(
      select,
      addTo("→ X", (field) => ({ type: "set-axis", axis: "x", field })),
      addTo("→ Y", (field) => ({ type: "set-axis", axis: "y", field })),
      addTo("→ Layers", (field) => ({ type: "add-layer", field })),
      addTo("→ Grouping", (field) => ({ type: "add-group", field })),
      addTo("Remove layer", (field) => ({ type: "remove-layer", field })),
      addTo("Remove grouping", (field) => ({ type: "remove-group", field })),
      addTo("Remove filter", (field) => ({ type: "remove-filter", field })),
    );
    const filterButton = el("button", undefined, "Add filter…");
    filterButton.onclick = () => {
      const field = select.value;
      const comparator = prompt(`Comparator for ${field} (< <= = != >= >)`, ">");
      if (!comparator) return;
      const operand = prompt(`Value for ${field} ${comparator}`, "0");
      if (operand === null) return;
      const numeric = Number(operand);
      this.apply({
        type: "add-filter",
        filter: {
          field,
          comparator: comparator as never,
          operands: [Number.isNaN(numeric) ? operand : numeric],
        },
      });
    };
    panel.appendChild(filterButton);
    return panel;
  }

  private apply(action: EditorAction): void {
    this.explorer
      .editSpec(action)
      .then(() => {
        this.status.textContent = "";
        this.specLine.textContent = describeSpec(this.explorer.currentSpec);
        return this.refreshSlice();
      })
      .catch((error) => {
        this.status.textContent =
          error instanceof EditorError ? error.message : String(error);
      });
  }

  private async refreshSlice(): Promise<void> {
    try {
      const model = await this.explorer.fetchSlice();
      renderModel(model, this.sliceHost);
    } catch (error) {
      this.sliceHost.replaceChildren(el("p", "error", String(error)));
    }
  }

  private async refreshRecommendations(): Promise<void> {
    try {
      const cards = await this.explorer.requestRecommendations(3);
      this.cardsHost.replaceChildren(
        ...(cards.length ? cards.map((c) => this.card(c)) : [el("p", "empty-state", "No recommendations yet — the graph may be empty.")]),
      );
    } catch (error) {
      this.cardsHost.replaceChildren(el("p", "error", String(error)));
    }
  }

  private card(rec: RecommendationDocument): HTMLElement {
    const node = el("article", "card");
    const distance = rec.node.pathDistance === null ? "unreachable" : rec.node.pathDistance;
    node.appendChild(el("h3", undefined, `Slice #${rec.node.displayIndex}`));
    node.appendChild(el("p", "card-spec", describeSpec(rec.spec)));
    node.appendChild(
      el(
        "p",
        "card-meta",
        `distance ${distance} · interestingness ${rec.node.effectiveInterestingnessMs} ms` +
          (rec.node.viaFill ? " · fill" : "") +
          (rec.alreadyVisited ? " · visited" : ""),
      ),
    );
    if (rec.placeholderFilters.length) {
      node.appendChild(
        el("p", "card-placeholders", `needs bounds: ${rec.placeholderFilters.join(", ")}`),
      );
    }
    node.appendChild(el("pre", "card-sql", rec.sqlTemplate));

    const apply = el("button", "primary", "Apply");
    apply.onclick = () => {
      const fill: Record<string, { comparator: never; operands: (string | number)[] }> = {};
      for (const field of rec.placeholderFilters) {
        const comparator = prompt(`Comparator for ${field}`, ">");
        if (!comparator) continue;
        const operand = prompt(`Value for ${field} ${comparator}`, "0");
        if (operand === null) continue;
        const numeric = Number(operand);
        fill[field] = {
          comparator: comparator as never,
          operands: [Number.isNaN(numeric) ? operand : numeric],
        };
      }
      void this.explorer.applyRecommendation(rec, fill).then(() => {
        this.specLine.textContent = describeSpec(this.explorer.currentSpec);
        return this.refreshSlice();
      });
    };
    const upvote = el("button", undefined, "Upvote");
    upvote.onclick = () => void this.explorer.upvote(rec);
    const buttons = el("div", "card-actions");
    buttons.append(apply, upvote);
    node.appendChild(buttons);
    return node;
  }
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  let schema: SchemaDocument | null = null;
  try {
    const graph = await api.getGraph(TASK);
    void graph;
  } catch {
    // Graph may not exist yet; the explorer still works for evaluation.
  }
  const explorer = new Explorer({
    api,
    taskType: TASK,
    datasetName: DATASET,
    schema,
  });
  document.addEventListener("visibilitychange", () => {
    if (document.hidden) explorer.dwell.pause();
    else explorer.dwell.resume();
  });
  window.addEventListener("beforeunload", () => void explorer.shutdown());
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  new ExplorerView(root, explorer, schema);
}

void boot();
