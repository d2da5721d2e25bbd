/** The three figures: two ROC variants and the residual violins.
 *
 * Every figure is a pure function of the CSV text. Legends carry AUC values
 * recomputed from the raw rows with the shared sweep, rounded to three
 * decimals.
 */

import { num, parseCsv, requireColumns, Row } from "./csv";
import { kdeOnGrid, scottBandwidth } from "./kde";
import { rocCurve } from "./roc";
import { linearX, linearY, PALETTE, Svg } from "./svg";

const METHOD_LABEL: Record<string, string> = {
  "icmaxent/exact": "i-CMAXENT, exact P(X)",
  "icmaxent/marginals": "i-CMAXENT, merged marginals",
  "cmaxent/exact": "CMAXENT, exact P(X)",
  "cmaxent/marginals": "CMAXENT, merged marginals",
};

function rocItems(rows: Row[]): Array<{ score: number; label: boolean }> {
  return rows.map((r) => ({ score: num(r, "theta"), label: r["is_parent"] === "1" }));
}

function drawRocFrame(svg: Svg): { xs: (v: number) => number; ys: (v: number) => number } {
  const xs = linearX(0, 1);
  const ys = linearY(0, 1);
  svg.frame();
  svg.axisTicksX(xs, [0, 0.25, 0.5, 0.75, 1], "false positive rate");
  svg.axisTicksY(ys, [0, 0.25, 0.5, 0.75, 1], "true positive rate");
  svg.line(xs(0), ys(0), xs(1), ys(1), "#999", "diagonal", "4 3");
  return { xs, ys };
}

export function plotRocOverlay(csvText: string): string {
  const rows = parseCsv(csvText);
  requireColumns(rows, ["theta", "is_parent", "method", "px_mode"], "roc-overlay input");
  const combos = Object.keys(METHOD_LABEL);
  const present = new Set(rows.map((r) => `${r["method"]}/${r["px_mode"]}`));
  const missing = combos.filter((c) => !present.has(c));
  if (missing.length > 0) {
    throw new Error(
      `roc-overlay needs all four method/px combinations; missing: ${missing.join(", ")}`,
    );
  }
  const svg = new Svg("ROC overlay: constraint type by cause-joint input");
  const { xs, ys } = drawRocFrame(svg);
  const legend: Array<{ color: string; label: string }> = [];
  combos.forEach((combo, i) => {
    const [method, px] = combo.split("/");
    const subset = rows.filter((r) => r["method"] === method && r["px_mode"] === px);
    const { points, auc } = rocCurve(rocItems(subset));
    const color = PALETTE[i]!;
    svg.polyline(points.map((p) => [xs(p.fpr), ys(p.tpr)]), color, "roc-curve");
    legend.push({ color, label: `${METHOD_LABEL[combo]} (AUC=${auc.toFixed(3)})` });
  });
  svg.legend(legend, 380, 420);
  return svg.render();
}

export function plotRocByK(csvText: string): string {
  const rows = parseCsv(csvText);
  requireColumns(rows, ["theta", "is_parent", "n_interventional"], "roc-by-k input");
  const ks = [...new Set(rows.map((r) => num(r, "n_interventional")))].sort((a, b) => a - b);
  const svg = new Svg("ROC by number of interventional constraints");
  const { xs, ys } = drawRocFrame(svg);
  const legend: Array<{ color: string; label: string }> = [];
  ks.forEach((k, i) => {
    const subset = rows.filter((r) => num(r, "n_interventional") === k);
    const { points, auc } = rocCurve(rocItems(subset));
    const color = PALETTE[i % PALETTE.length]!;
    svg.polyline(points.map((p) => [xs(p.fpr), ys(p.tpr)]), color, "roc-curve");
    legend.push({ color, label: `k=${k} (AUC=${auc.toFixed(3)})` });
  });
  svg.legend(legend, 470, 400);
  return svg.render();
}

const CONFIG_ORDER: Array<[number, number]> = [
  [0, 0],
  [0, 1],
  [1, 0],
  [1, 1],
];

export function plotViolin(csvText: string): string {
  const rows = parseCsv(csvText);
  requireColumns(rows, ["scenario", "x1", "x2", "residual"], "violin input");
  const scenarios = [1, 2, 3, 4, 5];
  const present = new Set(rows.map((r) => num(r, "scenario")));
  const missing = scenarios.filter((s) => !present.has(s));
  if (missing.length > 0) {
    throw new Error(`violin needs scenarios 1-5; missing: ${missing.join(", ")}`);
  }

  const groups: Array<{ scenario: number; x1: number; x2: number; values: number[] }> = [];
  for (const scenario of scenarios) {
    for (const [x1, x2] of CONFIG_ORDER) {
      const values = rows
        .filter(
          (r) => num(r, "scenario") === scenario && num(r, "x1") === x1 && num(r, "x2") === x2,
        )
        .map((r) => num(r, "residual"));
      if (values.length === 0) {
        throw new Error(`violin: no rows for scenario ${scenario} at (x1,x2)=(${x1},${x2})`);
      }
      groups.push({ scenario, x1, x2, values });
    }
  }

  const all = groups.flatMap((g) => g.values);
  const lo = Math.min(...all, -0.05);
  const hi = Math.max(...all, 0.05);
  const pad = 0.08 * (hi - lo);
  const ys = linearY(lo - pad, hi + pad);
  const xs = linearX(0, groups.length);
  const svg = new Svg("Residuals of the estimated joint interventional distribution");
  svg.frame();
  svg.axisTicksY(ys, niceTicks(lo - pad, hi + pad), "estimated - true");
  svg.line(xs(0), ys(0), xs(groups.length), ys(0), "#555", "zero-line", "5 4");

  groups.forEach((group, gi) => {
    const color = PALETTE[group.scenario - 1]!;
    const center = xs(gi + 0.5);
    const halfSlot = (xs(1) - xs(0)) * 0.42;
    const bw = scottBandwidth(group.values);
    const gmin = Math.min(...group.values);
    const gmax = Math.max(...group.values);
    const gridLo = gmin - 2 * bw;
    const gridHi = gmax + 2 * bw;
    const grid: number[] = [];
    for (let i = 0; i <= 60; i++) {
      grid.push(gridLo + ((gridHi - gridLo) * i) / 60);
    }
    const density = kdeOnGrid(group.values, grid, bw);
    const dmax = Math.max(...density);
    const right = grid.map(
      (g, i) => [center + (density[i]! / dmax) * halfSlot, ys(g)] as [number, number],
    );
    const left = [...grid.keys()]
      .reverse()
      .map((i) => [center - (density[i]! / dmax) * halfSlot, ys(grid[i]!)] as [number, number]);
    const d =
      `M ${right.map(([x, y]) => `${x.toFixed(2)} ${y.toFixed(2)}`).join(" L ")}` +
      ` L ${left.map(([x, y]) => `${x.toFixed(2)} ${y.toFixed(2)}`).join(" L ")} Z`;
    svg.path(d, color, color, "violin", 0.55);
    // extrema marks: horizontal ticks at the observed minimum and maximum
    for (const v of [gmin, gmax]) {
      svg.line(center - halfSlot * 0.6, ys(v), center + halfSlot * 0.6, ys(v), color, "extrema");
    }
    svg.text(center, ys(lo - pad) + 14, `${group.x1}${group.x2}`, 9, "middle");
    if (group.x1 === 0 && group.x2 === 1) {
      svg.text(center, 16, `scenario ${group.scenario}`, 11, "middle");
    }
  });

  svg.legend(
    scenarios.map((s) => ({ color: PALETTE[s - 1]!, label: `scenario ${s}` })),
    600,
    48,
  );
  return svg.render();
}

function niceTicks(lo: number, hi: number): number[] {
  const span = hi - lo;
  const step = span > 0.8 ? 0.2 : span > 0.4 ? 0.1 : 0.05;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
    out.push(Number(v.toFixed(10)));
  }
  return out;
}
