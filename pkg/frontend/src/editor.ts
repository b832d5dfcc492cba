// Specification editing. Every UI action maps to exactly one navigation
// operation; invalid actions throw with a message for inline display.

import { cloneSpec, isAggregatedField, isPlaceholder } from "./spec.js";
import type { FilterDocument, NavOpDocument, SpecDocument } from "./types.js";

export type EditorAction =
  | { type: "set-axis"; axis: "x" | "y"; field: string }
  | { type: "clear-axis"; axis: "x" | "y" }
  | { type: "add-layer"; field: string }
  | { type: "remove-layer"; field: string }
  | { type: "add-filter"; filter: FilterDocument }
  | { type: "remove-filter"; field: string }
  | { type: "add-group"; field: string }
  | { type: "remove-group"; field: string };

export class EditorError extends Error {}

export interface EditResult {
  spec: SpecDocument;
  op: NavOpDocument;
}

function normalizedFilter(filter: FilterDocument): FilterDocument {
  const out: FilterDocument = {
    field: filter.field,
    aggregated: isAggregatedField(filter.field),
  };
  if (filter.comparator !== undefined && filter.comparator !== null) {
    out.comparator = filter.comparator;
    out.operands = [...(filter.operands ?? [])];
  }
  return out;
}

export function applyAction(spec: SpecDocument, action: EditorAction): EditResult {
  const next = cloneSpec(spec);
  switch (action.type) {
    case "set-axis": {
      if (next[action.axis] !== null) {
        throw new EditorError(
          `${action.axis} axis already holds ${next[action.axis]}; remove it first`,
        );
      }
      if ((action.axis === "x" ? next.y : next.x) === action.field) {
        throw new EditorError("x and y must differ");
      }
      next[action.axis] = action.field;
      return {
        spec: next,
        op: {
          kind: "AddSelectField",
          field: action.field,
          slot: action.axis === "x" ? "X" : "Y",
        },
      };
    }
    case "clear-axis": {
      const held = next[action.axis];
      if (held === null) throw new EditorError(`${action.axis} axis is empty`);
      next[action.axis] = null;
      return {
        spec: next,
        op: {
          kind: "RemoveSelectField",
          field: held,
          slot: action.axis === "x" ? "X" : "Y",
        },
      };
    }
    case "add-layer": {
      if (next.layers.includes(action.field)) {
        throw new EditorError(`layer ${action.field} is already present`);
      }
      next.layers.push(action.field);
      return {
        spec: next,
        op: { kind: "AddSelectField", field: action.field, slot: "Layer" },
      };
    }
    case "remove-layer": {
      const at = next.layers.indexOf(action.field);
      if (at < 0) throw new EditorError(`no layer ${action.field}`);
      next.layers.splice(at, 1);
      return {
        spec: next,
        op: { kind: "RemoveSelectField", field: action.field, slot: "Layer" },
      };
    }
    case "add-filter": {
      const filter = normalizedFilter(action.filter);
      const duplicate = next.filters.some(
        (f) => JSON.stringify(normalizedFilter(f)) === JSON.stringify(filter),
      );
      if (duplicate) throw new EditorError(`that filter on ${filter.field} already exists`);
      if (isPlaceholder(filter) && next.filters.some((f) => f.field === filter.field)) {
        throw new EditorError(`a filter on ${filter.field} already exists`);
      }
      next.filters.push(filter);
      return {
        spec: next,
        op: isPlaceholder(filter)
          ? { kind: "AddFilter", field: filter.field }
          : { kind: "AddFilter", field: filter.field, predicate: filter },
      };
    }
    case "remove-filter": {
      const kept = next.filters.filter((f) => f.field !== action.field);
      if (kept.length === next.filters.length) {
        throw new EditorError(`no filter on ${action.field}`);
      }
      next.filters = kept;
      return { spec: next, op: { kind: "RemoveFilter", field: action.field } };
    }
    case "add-group": {
      if (next.grouping.includes(action.field)) {
        throw new EditorError(`grouping already contains ${action.field}`);
      }
      next.grouping.push(action.field);
      return { spec: next, op: { kind: "AddGroupField", field: action.field } };
    }
    case "remove-group": {
      const at = next.grouping.indexOf(action.field);
      if (at < 0) throw new EditorError(`grouping does not contain ${action.field}`);
      next.grouping.splice(at, 1);
      return { spec: next, op: { kind: "RemoveGroupField", field: action.field } };
    }
  }
}
