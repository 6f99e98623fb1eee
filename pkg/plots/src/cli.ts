// Command-line front end: `plot curves --in run1.csv run2.csv --out fig.svg`
// and `plot sweep --in sweep.csv --out fig.svg`.

import { readFileSync, writeFileSync } from 'node:fs'
import { basename } from 'node:path'
import { parseArgs } from 'node:util'

import { parseMetricsCsv, parseSweepCsv } from './csv.js'
import { learningCurves, sweepFigure } from './figure.js'

const USAGE = 'usage: plot curves|sweep --in <csv...> --out <svg>'

export function main(argv: string[]): number {
  let parsed
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        in: { type: 'string', multiple: true },
        out: { type: 'string' },
      },
      allowPositionals: true,
    })
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    return 1
  }
  const [command, ...extraInputs] = parsed.positionals
  // inputs may arrive as repeated --in flags or trail the first one
  const inputs = [...(parsed.values.in ?? []), ...extraInputs]
  const out = parsed.values.out

  try {
    if (command !== 'curves' && command !== 'sweep') {
      throw new Error(USAGE)
    }
    if (inputs.length === 0 || !out) throw new Error(USAGE)
    let svg: string
    if (command === 'curves') {
      const files = inputs.map((path) => ({
        name: basename(path, '.csv'),
        file: parseMetricsCsv(readFileSync(path, 'utf8'), path),
      }))
      svg = learningCurves(files)
    } else {
      if (inputs.length !== 1) {
        throw new Error('sweep takes exactly one aggregated csv')
      }
      svg = sweepFigure(parseSweepCsv(readFileSync(inputs[0], 'utf8'), inputs[0]))
    }
    writeFileSync(out, svg)
    console.log(`wrote ${out}`)
    return 0
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    return 1
  }
}
