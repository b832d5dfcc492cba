// DOM drawing for render models: plain SVG and HTML, no chart library.

import type { BarModel, BoxModel, LineModel, RenderModel, ScatterModel, TableModel } from "./charts.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 560;
const HEIGHT = 300;
const PAD = 40;

function svgRoot(): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "chart");
  return svg;
}

function shape(
  parent: SVGElement,
  name: string,
  attrs: Record<string, string | number>,
  text?: string,
): SVGElement {
  const el = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  if (text !== undefined) el.textContent = text;
  parent.appendChild(el);
  return el;
}

function scale(values: number[]): (v: number) => number {
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi - lo || 1;
  return (v) => (v - lo) / span;
}

function renderTable(model: TableModel): HTMLElement {
  const table = document.createElement("table");
  table.className = "result-table";
  const head = table.createTHead().insertRow();
  for (const header of model.headers) {
    const cell = document.createElement("th");
    cell.textContent = header;
    head.appendChild(cell);
  }
  const body = table.createTBody();
  for (const row of model.rows) {
    const tr = body.insertRow();
    for (const value of row) {
      tr.insertCell().textContent = value === null ? "∅" : String(value);
    }
  }
  return table;
}

function renderBars(model: BarModel): SVGSVGElement {
  const svg = svgRoot();
  const unit = scale(model.bars.map((b) => b.value).concat(0));
  const step = (WIDTH - 2 * PAD) / model.bars.length;
  model.bars.forEach((bar, i) => {
    const h = unit(bar.value) * (HEIGHT - 2 * PAD);
    shape(svg, "rect", {
      x: PAD + i * step + 4,
      y: HEIGHT - PAD - h,
      width: Math.max(step - 8, 2),
      height: h,
      class: "bar",
    });
    shape(svg, "text", {
      x: PAD + i * step + step / 2,
      y: HEIGHT - PAD + 14,
      "text-anchor": "middle",
      class: "tick",
    }, bar.label.slice(0, 12));
  });
  shape(svg, "text", { x: PAD, y: 16, class: "axis-label" }, model.valueLabel);
  return svg;
}

function renderLine(model: LineModel): SVGSVGElement {
  const svg = svgRoot();
  const unit = scale(model.points.map((p) => p.y));
  const step = (WIDTH - 2 * PAD) / Math.max(model.points.length - 1, 1);
  const path = model.points
    .map((p, i) => {
      const x = PAD + i * step;
      const y = HEIGHT - PAD - unit(p.y) * (HEIGHT - 2 * PAD);
      return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  shape(svg, "path", { d: path, class: "line", fill: "none" });
  shape(svg, "text", { x: PAD, y: 16, class: "axis-label" }, model.seriesLabel);
  return svg;
}

function renderScatter(model: ScatterModel): SVGSVGElement {
  const svg = svgRoot();
  const sx = scale(model.points.map((p) => p.lon));
  const sy = scale(model.points.map((p) => p.lat));
  const weights = model.points.map((p) => p.weight ?? 1);
  const sw = scale(weights);
  model.points.forEach((p, i) => {
    shape(svg, "circle", {
      cx: PAD + sx(p.lon) * (WIDTH - 2 * PAD),
      cy: HEIGHT - PAD - sy(p.lat) * (HEIGHT - 2 * PAD),
      r: 3 + sw(weights[i]) * 9,
      class: "dot",
    });
  });
  shape(svg, "text", { x: PAD, y: 16, class: "axis-label" },
        `${model.latLabel} × ${model.lonLabel}`);
  return svg;
}

function renderBox(model: BoxModel): SVGSVGElement {
  const svg = svgRoot();
  const everything = model.values.concat(model.min, model.max);
  const unit = scale(everything);
  const y = (v: number) => HEIGHT - PAD - unit(v) * (HEIGHT - 2 * PAD);
  const mid = WIDTH / 2;
  shape(svg, "line", { x1: mid, y1: y(model.min), x2: mid, y2: y(model.max), class: "whisker" });
  shape(svg, "rect", {
    x: mid - 50, y: y(model.q3), width: 100,
    height: Math.max(y(model.q1) - y(model.q3), 1), class: "box",
  });
  shape(svg, "line", {
    x1: mid - 50, y1: y(model.median), x2: mid + 50, y2: y(model.median), class: "median",
  });
  for (const v of model.outliers) {
    shape(svg, "circle", { cx: mid, cy: y(v), r: 4, class: "outlier" });
  }
  shape(svg, "text", { x: PAD, y: 16, class: "axis-label" }, model.valueLabel);
  return svg;
}

export function renderModel(model: RenderModel, host: HTMLElement): void {
  host.replaceChildren();
  switch (model.kind) {
    case "empty": {
      const panel = document.createElement("p");
      panel.className = "empty-state";
      panel.textContent = model.message;
      host.appendChild(panel);
      return;
    }
    case "table":
      host.appendChild(renderTable(model));
      return;
    case "bar":
      host.appendChild(renderBars(model));
      return;
    case "line":
      host.appendChild(renderLine(model));
      return;
    case "map-scatter":
      host.appendChild(renderScatter(model));
      return;
    case "box-plot":
      host.appendChild(renderBox(model));
      return;
  }
}
