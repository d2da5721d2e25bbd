/** Tiny deterministic SVG scene builder: same input, same bytes.
 *
 * Only what the three figures need: a framed plot area with linear axes,
 * polylines, filled paths, reference lines, and a legend block. All style
 * constants live here so the output is pinned.
 */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 64, right: 16, top: 24, bottom: 48 };

export const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

export interface Scale {
  (value: number): number;
}

export function linearX(lo: number, hi: number): Scale {
  return (v) => MARGIN.left + ((v - lo) / (hi - lo)) * PLOT_W;
}

export function linearY(lo: number, hi: number): Scale {
  return (v) => MARGIN.top + PLOT_H - ((v - lo) / (hi - lo)) * PLOT_H;
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
}

export class Svg {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
      `<title>${escapeXml(title)}</title>`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    );
  }

  frame(): void {
    this.parts.push(
      `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" ` +
        `fill="none" stroke="#333" stroke-width="1"/>`,
    );
  }

  axisTicksX(xs: Scale, values: number[], label: string): void {
    const y0 = MARGIN.top + PLOT_H;
    for (const v of values) {
      const x = xs(v);
      this.parts.push(
        `<line x1="${fmt(x)}" y1="${y0}" x2="${fmt(x)}" y2="${y0 + 5}" stroke="#333"/>`,
        `<text x="${fmt(x)}" y="${y0 + 18}" font-size="11" text-anchor="middle">${fmt(v)}</text>`,
      );
    }
    this.parts.push(
      `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 10}" font-size="12" ` +
        `text-anchor="middle">${escapeXml(label)}</text>`,
    );
  }

  axisTicksY(ys: Scale, values: number[], label: string): void {
    for (const v of values) {
      const y = ys(v);
      this.parts.push(
        `<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#333"/>`,
        `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" font-size="11" text-anchor="end">${fmt(v)}</text>`,
      );
    }
    this.parts.push(
      `<text x="14" y="${MARGIN.top + PLOT_H / 2}" font-size="12" text-anchor="middle" ` +
        `transform="rotate(-90 14 ${MARGIN.top + PLOT_H / 2})">${escapeXml(label)}</text>`,
    );
  }

  polyline(points: Array<[number, number]>, color: string, cls: string, dash = ""): void {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline class="${cls}" points="${path}" fill="none" stroke="${color}" stroke-width="1.5"${attr}/>`,
    );
  }

  path(d: string, fill: string, stroke: string, cls: string, opacity = 1): void {
    this.parts.push(
      `<path class="${cls}" d="${d}" fill="${fill}" stroke="${stroke}" ` +
        `stroke-width="0.8" fill-opacity="${opacity}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, color: string, cls: string, dash = ""): void {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line class="${cls}" x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${color}" stroke-width="1.2"${attr}/>`,
    );
  }

  text(x: number, y: number, content: string, size = 11, anchor = "start"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}">` +
        `${escapeXml(content)}</text>`,
    );
  }

  legend(entries: Array<{ color: string; label: string }>, x: number, y: number): void {
    entries.forEach((entry, i) => {
      const yy = y + i * 16;
      this.parts.push(
        `<line class="legend-swatch" x1="${x}" y1="${yy - 4}" x2="${x + 22}" y2="${yy - 4}" ` +
          `stroke="${entry.color}" stroke-width="2"/>`,
      );
      this.text(x + 28, y + i * 16, entry.label);
    });
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
