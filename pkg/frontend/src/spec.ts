// Spec-document helpers: construction, cloning, canonical comparison.

import type { FilterDocument, SpecDocument } from "./types.js";

export function emptySpec(): SpecDocument {
  return { x: null, y: null, layers: [], filters: [], grouping: [] };
}

export function cloneSpec(spec: SpecDocument): SpecDocument {
  return {
    x: spec.x,
    y: spec.y,
    layers: [...spec.layers],
    filters: spec.filters.map((f) => ({
      field: f.field,
      ...(f.comparator !== undefined ? { comparator: f.comparator } : {}),
      ...(f.operands !== undefined ? { operands: [...f.operands] } : {}),
    })),
    grouping: [...spec.grouping],
  };
}

export function isPlaceholder(filter: FilterDocument): boolean {
  return filter.comparator === undefined || filter.comparator === null;
}

export function filterDescriptors(spec: SpecDocument): string[] {
  return [...new Set(spec.filters.map((f) => f.field))].sort();
}

/** Canonical rendering matching the server's node-identity form. */
export function canonicalKey(spec: SpecDocument): string {
  const doc = {
    filters: filterDescriptors(spec),
    grouping: [...new Set(spec.grouping)].sort(),
    layers: [...new Set(spec.layers)].sort(),
    x: spec.x ?? null,
    y: spec.y ?? null,
  };
  // Keys are emitted in sorted order with compact separators and non-ASCII
  // escaped, byte-equal to the server's canonical JSON.
  return JSON.stringify(doc, ["filters", "grouping", "layers", "x", "y"]).replace(
    /[-￿]/g,
    (c) => "\\u" + c.charCodeAt(0).toString(16).padStart(4, "0"),
  );
}

export function sameSlice(a: SpecDocument, b: SpecDocument): boolean {
  return canonicalKey(a) === canonicalKey(b);
}

/** True when the field expression contains an aggregation operator. */
export function isAggregatedField(field: string): boolean {
  return /(?:^|[(+×/])(?:SUM|MIN|MAX|AVG)\(/.test(field);
}

export function describeSpec(spec: SpecDocument): string {
  const parts: string[] = [];
  if (spec.x) parts.push(`x: ${spec.x}`);
  if (spec.y) parts.push(`y: ${spec.y}`);
  if (spec.layers.length) parts.push(`layers: ${spec.layers.join(", ")}`);
  if (spec.filters.length) {
    const texts = spec.filters.map((f) =>
      isPlaceholder(f) ? `${f.field} ?` : `${f.field} ${f.comparator} ${f.operands!.join(", ")}`,
    );
    parts.push(`filters: ${texts.join(" AND ")}`);
  }
  if (spec.grouping.length) parts.push(`grouping: ${spec.grouping.join(", ")}`);
  return parts.length ? parts.join(" · ") : "empty specification";
}
