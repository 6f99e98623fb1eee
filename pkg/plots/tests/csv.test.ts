import { readFileSync } from 'node:fs'
import { join } from 'node:path'
import { describe, expect, it } from 'vitest'

import { parseMetricsCsv, parseSweepCsv } from '../src/csv.js'

const fixture = (name: string) =>
  readFileSync(join(__dirname, 'fixtures', name), 'utf8')

describe('parseMetricsCsv', () => {
  it('reads rows and the settings echoed as comments', () => {
    const { settings, rows } = parseMetricsCsv(fixture('sarsa-decision.csv'))
    expect(settings.algorithm).toBe('sarsa')
    expect(settings.assist).toBe('decision')
    expect(settings.rounds).toBe('6')
    expect(rows).toHaveLength(6)
    expect(rows[0].iteration).toBe(3)
    expect(rows[0].throughput).toBeCloseTo(0.26, 10)
    for (let i = 1; i < rows.length; i++) {
      expect(rows[i].iteration).toBeGreaterThan(rows[i - 1].iteration)
    }
    for (const row of rows) {
      expect(row.throughput).toBeGreaterThanOrEqual(0)
      expect(row.throughput).toBeLessThanOrEqual(0.5)
    }
  })

  it('accepts a header-only file as zero rows', () => {
    const { settings, rows } = parseMetricsCsv(fixture('empty.csv'))
    expect(rows).toHaveLength(0)
    expect(settings.rounds).toBe('0')
  })

  it('rejects a header with missing or renamed columns', () => {
    expect(() => parseMetricsCsv('iteration,reward\n1,0.5\n')).toThrow(/expected columns/)
  })

  it('rejects a file with no header at all', () => {
    expect(() => parseMetricsCsv('# eta=8.0\n')).toThrow(/missing header/)
  })

  it('rejects non-numeric cells with the row number', () => {
    const text = 'iteration,throughput,loss,epsilon,mean_abs_invalid_q,seconds\n1,oops,0,1,0,0\n'
    expect(() => parseMetricsCsv(text)).toThrow(/row 1.*oops/)
  })
})

describe('parseSweepCsv', () => {
  it('reads the axis, policy labels, and median rows', () => {
    const sweep = parseSweepCsv(fixture('delay-sweep.csv'))
    expect(sweep.axis).toBe('delay')
    expect(sweep.policies).toEqual(['max-link', 'random'])
    expect(sweep.rows.map((r) => r.value)).toEqual([2, 4, 6])
    for (const row of sweep.rows) {
      expect(row.medians).toHaveLength(2)
    }
    expect(sweep.settings.preset).toBe('iid_default')
  })

  it('needs at least one policy column', () => {
    expect(() => parseSweepCsv('delay\n2\n')).toThrow(/at least one policy/)
  })

  it('rejects ragged rows', () => {
    expect(() => parseSweepCsv('delay,max-link\n2,0.1,0.2\n')).toThrow(/row 1/)
  })
})
