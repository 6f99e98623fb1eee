// Parsers for the two CSV layouts the training harness writes: per-run
// metrics logs and aggregated sweep tables. Both start with "# key=value"
// comment lines echoing the run configuration, then a fixed header row.

export const METRICS_COLUMNS = [
  'iteration',
  'throughput',
  'loss',
  'epsilon',
  'mean_abs_invalid_q',
  'seconds',
] as const

export interface MetricsRow {
  iteration: number
  throughput: number
  loss: number
  epsilon: number
  meanAbsInvalidQ: number
  seconds: number
}

export interface MetricsFile {
  settings: Record<string, string>
  rows: MetricsRow[]
}

export interface SweepFile {
  settings: Record<string, string>
  axis: string
  policies: string[]
  rows: { value: number; medians: number[] }[]
}

function splitLines(text: string): { settings: Record<string, string>; data: string[] } {
  const settings: Record<string, string> = {}
  const data: string[] = []
  for (const raw of text.split('\n')) {
    const line = raw.trimEnd()
    if (line === '') continue
    if (line.startsWith('#')) {
      const body = line.slice(1).trim()
      const eq = body.indexOf('=')
      if (eq > 0) settings[body.slice(0, eq)] = body.slice(eq + 1)
      continue
    }
    data.push(line)
  }
  return { settings, data }
}

function toNumber(cell: string, name: string, lineNo: number): number {
  const value = Number(cell)
  if (cell.trim() === '' || Number.isNaN(value)) {
    throw new Error(`${name}: row ${lineNo}: not a number: ${JSON.stringify(cell)}`)
  }
  return value
}

export function parseMetricsCsv(text: string, name = 'metrics csv'): MetricsFile {
  const { settings, data } = splitLines(text)
  if (data.length === 0) throw new Error(`${name}: missing header row`)
  const header = data[0].split(',')
  const expected = METRICS_COLUMNS as readonly string[]
  if (header.length !== expected.length || header.some((col, i) => col !== expected[i])) {
    throw new Error(`${name}: expected columns ${expected.join(',')}, got ${data[0]}`)
  }
  const rows = data.slice(1).map((line, i) => {
    const cells = line.split(',')
    if (cells.length !== expected.length) {
      throw new Error(`${name}: row ${i + 1}: expected ${expected.length} cells, got ${cells.length}`)
    }
    const [iteration, throughput, loss, epsilon, meanAbsInvalidQ, seconds] = cells.map(
      (cell) => toNumber(cell, name, i + 1),
    )
    return { iteration, throughput, loss, epsilon, meanAbsInvalidQ, seconds }
  })
  return { settings, rows }
}

export function parseSweepCsv(text: string, name = 'sweep csv'): SweepFile {
  const { settings, data } = splitLines(text)
  if (data.length === 0) throw new Error(`${name}: missing header row`)
  const header = data[0].split(',')
  if (header.length < 2) {
    throw new Error(`${name}: header needs an axis column plus at least one policy, got ${data[0]}`)
  }
  const [axis, ...policies] = header
  const rows = data.slice(1).map((line, i) => {
    const cells = line.split(',')
    if (cells.length !== header.length) {
      throw new Error(`${name}: row ${i + 1}: expected ${header.length} cells, got ${cells.length}`)
    }
    const numbers = cells.map((cell) => toNumber(cell, name, i + 1))
    return { value: numbers[0], medians: numbers.slice(1) }
  })
  return { settings, axis, policies, rows }
}
