// Chart selection and rendering. Selection mirrors the server's precedence:
// the user's preference when it covers the slice's layers, then a stored
// visual, then the default rule table. Rendering builds a plain data model
// first so chart logic stays testable without a DOM.

import { isAggregatedField } from "./spec.js";
import type {
  ResultTableDocument,
  SchemaDocument,
  SpecDocument,
  VisualDocument,
} from "./types.js";

export type ChartType = "map-scatter" | "line" | "bar" | "box-plot" | "table";

function roleOf(field: string | null, schema: SchemaDocument | null, role: string): boolean {
  if (!field || isAggregatedField(field)) return false;
  const column = schema?.columns.find((c) => c.name === field);
  if (column) return column.role === role;
  const name = field.toLowerCase();
  if (role === "latitude") return name === "lat" || name === "latitude";
  if (role === "longitude") return ["lon", "long", "longitude"].includes(name);
  return false;
}

function isTemporal(field: string | null, schema: SchemaDocument | null): boolean {
  if (!field || isAggregatedField(field)) return false;
  const column = schema?.columns.find((c) => c.name === field);
  if (column) return column.type === "datetime";
  return ["time", "date", "datetime", "year", "timestamp"].includes(field.toLowerCase());
}

export function defaultChartType(
  spec: SpecDocument,
  schema: SchemaDocument | null = null,
): ChartType {
  const axes = [spec.x, spec.y].filter((f): f is string => f !== null);
  const pooled = [...axes, ...spec.layers];
  const aggregates = pooled.filter(isAggregatedField);
  const hasLat = axes.some((f) => roleOf(f, schema, "latitude"));
  const hasLon = axes.some((f) => roleOf(f, schema, "longitude"));
  if (hasLat && hasLon) return "map-scatter";
  if (isTemporal(spec.x, schema) && aggregates.length) return "line";
  const dimensions = axes.filter((f) => !isAggregatedField(f));
  if (dimensions.length === 1 && aggregates.length) return "bar";
  if (aggregates.length === 1 && !spec.x && !spec.y) return "box-plot";
  return "table";
}

export function chooseChartType(
  spec: SpecDocument,
  userPref: VisualDocument | null,
  storedVisuals: VisualDocument[],
  schema: SchemaDocument | null = null,
): { chartType: ChartType | string; source: "preference" | "stored" | "rule" } {
  if (userPref) {
    const encoded = new Set(userPref.encodings.map((e) => e.field));
    if (spec.layers.every((layer) => encoded.has(layer))) {
      return { chartType: userPref.chartType, source: "preference" };
    }
  }
  if (storedVisuals.length) {
    return { chartType: storedVisuals[0].chartType, source: "stored" };
  }
  return { chartType: defaultChartType(spec, schema), source: "rule" };
}

// --- render models -----------------------------------------------------------

export interface TableModel {
  kind: "table";
  headers: string[];
  rows: (string | number | boolean | null)[][];
}

export interface BarModel {
  kind: "bar";
  valueLabel: string;
  bars: { label: string; value: number }[];
}

export interface LineModel {
  kind: "line";
  seriesLabel: string;
  points: { x: string; y: number }[];
}

export interface ScatterModel {
  kind: "map-scatter";
  latLabel: string;
  lonLabel: string;
  points: { lat: number; lon: number; weight: number | null }[];
}

export interface BoxModel {
  kind: "box-plot";
  valueLabel: string;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  outliers: number[];
  values: number[];
}

export interface EmptyModel {
  kind: "empty";
  message: string;
}

export type RenderModel =
  | TableModel
  | BarModel
  | LineModel
  | ScatterModel
  | BoxModel
  | EmptyModel;

function numericColumns(table: ResultTableDocument): number[] {
  return table.columns
    .map((c, i) => ({ c, i }))
    .filter(({ c }) => c.type === "int" || c.type === "float")
    .map(({ i }) => i);
}

function quantile(sorted: number[], q: number): number {
  if (sorted.length === 1) return sorted[0];
  const at = (sorted.length - 1) * q;
  const lo = Math.floor(at);
  const hi = Math.ceil(at);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (at - lo);
}

export function buildRenderModel(
  table: ResultTableDocument,
  chartType: ChartType | string,
): RenderModel {
  if (table.rows.length === 0) {
    return { kind: "empty", message: "No rows match this specification." };
  }
  const headers = table.columns.map((c) => c.label);
  const numeric = numericColumns(table);

  if (chartType === "bar" && numeric.length >= 1 && table.columns.length >= 2) {
    const value = numeric[numeric.length - 1];
    const label = table.columns.findIndex((_, i) => i !== value);
    return {
      kind: "bar",
      valueLabel: headers[value],
      bars: table.rows.map((row) => ({
        label: String(row[label]),
        value: Number(row[value] ?? 0),
      })),
    };
  }

  if (chartType === "line" && numeric.length >= 1 && table.columns.length >= 2) {
    const value = numeric[numeric.length - 1];
    const axis = table.columns.findIndex((_, i) => i !== value);
    return {
      kind: "line",
      seriesLabel: headers[value],
      points: table.rows.map((row) => ({
        x: String(row[axis]),
        y: Number(row[value] ?? 0),
      })),
    };
  }

  if (chartType === "map-scatter") {
    const lat = headers.findIndex((h) => h.toLowerCase().includes("lat"));
    const lon = headers.findIndex((h) => h.toLowerCase().includes("lon"));
    if (lat >= 0 && lon >= 0) {
      const weight = numeric.find((i) => i !== lat && i !== lon);
      return {
        kind: "map-scatter",
        latLabel: headers[lat],
        lonLabel: headers[lon],
        points: table.rows.map((row) => ({
          lat: Number(row[lat]),
          lon: Number(row[lon]),
          weight: weight === undefined ? null : Number(row[weight]),
        })),
      };
    }
  }

  if (chartType === "box-plot" && numeric.length >= 1) {
    const column = numeric[numeric.length - 1];
    const values = table.rows
      .map((row) => row[column])
      .filter((v): v is number => typeof v === "number")
      .sort((a, b) => a - b);
    if (values.length) {
      const q1 = quantile(values, 0.25);
      const q3 = quantile(values, 0.75);
      const iqr = q3 - q1;
      const inside = values.filter((v) => v >= q1 - 1.5 * iqr && v <= q3 + 1.5 * iqr);
      return {
        kind: "box-plot",
        valueLabel: headers[column],
        min: inside[0] ?? values[0],
        q1,
        median: quantile(values, 0.5),
        q3,
        max: inside[inside.length - 1] ?? values[values.length - 1],
        outliers: values.filter((v) => v < q1 - 1.5 * iqr || v > q3 + 1.5 * iqr),
        values,
      };
    }
  }

  return { kind: "table", headers, rows: table.rows };
}
