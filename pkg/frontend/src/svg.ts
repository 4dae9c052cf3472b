/**
 * Minimal deterministic SVG line plots: same data in, same bytes out.
 */

export interface Point {
  x: number;
  y: number;
  /** half-length of the vertical error bar; no bar when 0 */
  yerr?: number;
}

export interface Series {
  label: string;
  points: Point[];
}

export interface PlotSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  /** render x on a log10 axis */
  logX?: boolean;
  series: Series[];
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 200, top: 40, bottom: 48 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];
const DASHES = ["", "6 3", "2 2", "8 3 2 3"];

function fmt(value: number): string {
  return value.toFixed(2);
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * step; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderPlot(spec: PlotSpec): string {
  if (spec.series.length === 0) {
    throw new Error("nothing to plot: no series");
  }
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of spec.series) {
    for (const p of s.points) {
      xs.push(spec.logX ? Math.log10(p.x) : p.x);
      ys.push(p.y + (p.yerr ?? 0), p.y - (p.yerr ?? 0));
    }
  }
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(0, ...ys);
  let yHi = Math.max(...ys);
  if (xHi === xLo) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  if (yHi === yLo) {
    yHi = yLo + 1;
  }
  const yPad = 0.05 * (yHi - yLo);
  yHi += yPad;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) =>
    MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="20" text-anchor="middle" font-size="15" font-family="sans-serif">${escapeXml(spec.title)}</text>`
  );

  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`
  );

  // x ticks: decades for log axes, nice steps otherwise
  const xTicks = spec.logX
    ? niceTicks(Math.ceil(xLo - 1e-9), Math.floor(xHi + 1e-9), 6).filter(
        (v) => Number.isInteger(v) && v >= xLo - 1e-9 && v <= xHi + 1e-9
      )
    : niceTicks(xLo, xHi, 6);
  for (const t of xTicks) {
    const px = sx(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${fmt(MARGIN.top + plotH)}" x2="${fmt(px)}" y2="${fmt(MARGIN.top + plotH + 5)}" stroke="#333"/>`
    );
    const label = spec.logX ? `1e${t}` : String(t);
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(MARGIN.top + plotH + 18)}" text-anchor="middle" font-size="11" font-family="sans-serif">${label}</text>`
    );
  }
  for (const t of niceTicks(yLo, yHi, 6)) {
    const py = sy(t);
    parts.push(
      `<line x1="${fmt(MARGIN.left - 5)}" y1="${fmt(py)}" x2="${fmt(MARGIN.left)}" y2="${fmt(py)}" stroke="#333"/>`
    );
    parts.push(
      `<text x="${fmt(MARGIN.left - 8)}" y="${fmt(py + 4)}" text-anchor="end" font-size="11" font-family="sans-serif">${t}</text>`
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="13" font-family="sans-serif">${escapeXml(spec.xLabel)}</text>`
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" font-family="sans-serif" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${escapeXml(spec.yLabel)}</text>`
  );

  spec.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const dash = DASHES[Math.floor(i / PALETTE.length) % DASHES.length];
    const coords = series.points
      .map((p) => `${fmt(sx(spec.logX ? Math.log10(p.x) : p.x))},${fmt(sy(p.y))}`)
      .join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    parts.push(
      `<polyline class="curve" data-series="${escapeXml(series.label)}" fill="none" stroke="${color}" stroke-width="1.6"${dashAttr} points="${coords}"/>`
    );
    for (const p of series.points) {
      if ((p.yerr ?? 0) > 0) {
        const px = sx(spec.logX ? Math.log10(p.x) : p.x);
        parts.push(
          `<line class="errorbar" x1="${fmt(px)}" y1="${fmt(sy(p.y - p.yerr!))}" x2="${fmt(px)}" y2="${fmt(sy(p.y + p.yerr!))}" stroke="${color}" stroke-width="1"/>`
        );
      }
    }
    const ly = MARGIN.top + 14 + i * 16;
    parts.push(
      `<line x1="${WIDTH - MARGIN.right + 10}" y1="${ly - 4}" x2="${WIDTH - MARGIN.right + 34}" y2="${ly - 4}" stroke="${color}" stroke-width="1.6"${dashAttr}/>`
    );
    parts.push(
      `<text x="${WIDTH - MARGIN.right + 40}" y="${ly}" font-size="11" font-family="sans-serif">${escapeXml(series.label)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
