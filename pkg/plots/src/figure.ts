// SVG figure rendering. Everything is emitted as plain markup with stable
// classes and data attributes, so tests (and golden files) can compare the
// structure of a figure without rasterizing it.

import type { MetricsFile, SweepFile } from './csv.js'

export interface Series {
  label: string
  x: number[]
  y: number[]
}

export interface FigureOptions {
  xLabel: string
  yLabel: string
  /** Fixed y range; derived from the data when omitted. */
  yDomain?: [number, number]
  title?: string
}

export interface FigureStructure {
  xLabel: string
  yLabel: string
  yDomain: [number, number]
  series: { label: string; points: number }[]
  warning: boolean
}

const WIDTH = 640
const HEIGHT = 400
const MARGIN = { left: 62, right: 16, top: 28, bottom: 46 }
const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

const AXIS_TITLES: Record<string, string> = {
  delay: 'target delay (slots)',
  rate: 'target rate (bits/s/Hz)',
  relays: 'number of relays',
}

function extent(values: number[]): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const v of values) {
    if (v < lo) lo = v
    if (v > hi) hi = v
  }
  if (lo === Infinity) return [0, 1]
  if (lo === hi) return [lo - 0.5, hi + 0.5] // degenerate single-value axis
  return [lo, hi]
}

function ticks(lo: number, hi: number, count = 5): number[] {
  const out: number[] = []
  for (let i = 0; i <= count; i++) out.push(lo + ((hi - lo) * i) / count)
  return out
}

const fmt = (v: number) => {
  const rounded = Math.round(v * 1000) / 1000
  return Object.is(rounded, -0) ? '0' : String(rounded)
}

function escape(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;')
}

export function renderFigure(series: Series[], opts: FigureOptions): string {
  const points = series.flatMap((s) => s.x)
  const [xLo, xHi] = extent(points)
  const [yLo, yHi] = opts.yDomain ?? extent(series.flatMap((s) => s.y))
  const plotW = WIDTH - MARGIN.left - MARGIN.right
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom
  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW
  const sy = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH

  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12" ` +
      `data-y-domain="${fmt(yLo)},${fmt(yHi)}">`,
  )
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`)
  if (opts.title) {
    parts.push(
      `<text class="title" x="${WIDTH / 2}" y="16" text-anchor="middle">${escape(opts.title)}</text>`,
    )
  }

  for (const t of ticks(yLo, yHi)) {
    const y = sy(t)
    parts.push(
      `<line class="grid" x1="${MARGIN.left}" y1="${fmt(y)}" x2="${WIDTH - MARGIN.right}" ` +
        `y2="${fmt(y)}" stroke="#ddd"/>`,
      `<text class="tick" x="${MARGIN.left - 6}" y="${fmt(y + 4)}" text-anchor="end">${fmt(t)}</text>`,
    )
  }
  for (const t of ticks(xLo, xHi)) {
    const x = sx(t)
    parts.push(
      `<text class="tick" x="${fmt(x)}" y="${HEIGHT - MARGIN.bottom + 16}" text-anchor="middle">${fmt(t)}</text>`,
    )
  }

  // axis lines and titles
  parts.push(
    `<line class="axis" x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${HEIGHT - MARGIN.bottom}" stroke="black"/>`,
    `<line class="axis" x1="${MARGIN.left}" y1="${HEIGHT - MARGIN.bottom}" ` +
      `x2="${WIDTH - MARGIN.right}" y2="${HEIGHT - MARGIN.bottom}" stroke="black"/>`,
    `<text class="axis-label" data-axis="x" x="${MARGIN.left + plotW / 2}" ` +
      `y="${HEIGHT - 10}" text-anchor="middle">${escape(opts.xLabel)}</text>`,
    `<text class="axis-label" data-axis="y" x="14" y="${MARGIN.top + plotH / 2}" ` +
      `text-anchor="middle" transform="rotate(-90 14 ${MARGIN.top + plotH / 2})">${escape(opts.yLabel)}</text>`,
  )

  let drew = false
  series.forEach((s, i) => {
    if (s.x.length === 0) return
    drew = true
    const color = PALETTE[i % PALETTE.length]
    const coords = s.x.map((v, j) => `${fmt(sx(v))},${fmt(sy(s.y[j]))}`).join(' ')
    parts.push(
      `<polyline class="series" data-label="${escape(s.label)}" data-points="${s.x.length}" ` +
        `points="${coords}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    )
    const ly = MARGIN.top + 14 + i * 16
    parts.push(
      `<line x1="${WIDTH - MARGIN.right - 150}" y1="${ly - 4}" x2="${WIDTH - MARGIN.right - 130}" ` +
        `y2="${ly - 4}" stroke="${color}" stroke-width="1.5"/>`,
      `<text class="legend" x="${WIDTH - MARGIN.right - 124}" y="${ly}">${escape(s.label)}</text>`,
    )
  })
  if (!drew) {
    parts.push(
      `<text class="warning" x="${MARGIN.left + plotW / 2}" y="${MARGIN.top + plotH / 2}" ` +
        `text-anchor="middle" fill="#a00">no data rows</text>`,
    )
  }
  parts.push('</svg>')
  return parts.join('\n') + '\n'
}

/** Learning-curve overlay: one line per metrics file, throughput vs the
 * prediction-update count, labeled from the config echoed in the header. */
export function learningCurves(files: { name: string; file: MetricsFile }[]): string {
  const series = files.map(({ name, file }) => {
    const { algorithm, assist } = file.settings
    return {
      label: algorithm && assist ? `${algorithm}-${assist}` : name,
      x: file.rows.map((r) => r.iteration),
      y: file.rows.map((r) => r.throughput),
    }
  })
  return renderFigure(series, {
    xLabel: 'prediction updates',
    yLabel: 'throughput (packets/slot)',
    yDomain: [0, 0.5],
  })
}

/** Sweep figure: one line per policy, median throughput vs the swept value. */
export function sweepFigure(file: SweepFile): string {
  const series = file.policies.map((label, i) => ({
    label,
    x: file.rows.map((r) => r.value),
    y: file.rows.map((r) => r.medians[i]),
  }))
  return renderFigure(series, {
    xLabel: AXIS_TITLES[file.axis] ?? file.axis,
    yLabel: 'throughput (packets/slot)',
    yDomain: [0, 0.5],
  })
}

/** Structural summary of a rendered figure, for golden-file comparison. */
export function describeFigure(svg: string): FigureStructure {
  const axisLabel = (axis: string) => {
    const match = svg.match(new RegExp(`<text class="axis-label" data-axis="${axis}"[^>]*>([^<]*)</text>`))
    return match ? match[1] : ''
  }
  const domainMatch = svg.match(/data-y-domain="([^"]+)"/)
  const [lo, hi] = (domainMatch ? domainMatch[1] : '0,1').split(',').map(Number)
  const series: { label: string; points: number }[] = []
  const polyline = /<polyline class="series" data-label="([^"]*)" data-points="(\d+)"/g
  for (let m = polyline.exec(svg); m !== null; m = polyline.exec(svg)) {
    series.push({ label: m[1], points: Number(m[2]) })
  }
  return {
    xLabel: axisLabel('x'),
    yLabel: axisLabel('y'),
    yDomain: [lo, hi],
    series,
    warning: svg.includes('class="warning"'),
  }
}
