import { readCsv, requireColumns, SchemaError, Table } from './csv.js'
import {
  Frame,
  PALETTE,
  axes,
  document,
  marker,
  padRange,
  polyline,
  scaleX,
  scaleY,
  text,
} from './svg.js'

export type FigureKind =
  | 'teleport_curves'
  | 'winding_panel'
  | 'correlator_revivals'
  | 'noise_robustness'

export interface FigureSpec {
  kind: FigureKind
  inputs: string[]
  title?: string
}

const WIDTH = 640
const HEIGHT = 420

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case 'teleport_curves':
      return teleportCurves(spec)
    case 'winding_panel':
      return windingPanel(spec)
    case 'correlator_revivals':
      return correlatorRevivals(spec)
    case 'noise_robustness':
      return noiseRobustness(spec)
    default:
      throw new SchemaError(`unknown figure kind '${spec.kind as string}'`)
  }
}

function groupBy(table: Table, column: string): Map<string, Record<string, string>[]> {
  const groups = new Map<string, Record<string, string>[]>()
  for (const row of table.rows) {
    const key = row[column]
    const bucket = groups.get(key)
    if (bucket) bucket.push(row)
    else groups.set(key, [row])
  }
  return groups
}

function col(rows: Record<string, string>[], name: string): number[] {
  return rows.map((r) => Number(r[name]))
}

function frameFor(xs: number[], ys: number[]): Frame {
  const [yMin, yMax] = padRange(Math.min(...ys), Math.max(...ys))
  return {
    x0: 58,
    y0: 30,
    width: WIDTH - 58 - 120,
    height: HEIGHT - 30 - 50,
    xMin: Math.min(...xs),
    xMax: Math.max(...xs),
    yMin,
    yMax,
  }
}

function teleportCurves(spec: FigureSpec): string {
  const path = spec.inputs[0]
  const table = readCsv(path)
  requireColumns(table, ['t1', 'mu', 'I_PT_nats'], path)
  const groups = [...groupBy(table, 'mu').entries()]
  const allT = col(table.rows, 't1')
  const allI = col(table.rows, 'I_PT_nats')
  const frame = frameFor(allT, allI)

  const parts: string[] = [axes(frame, 't1', 'I_PT (nats)')]
  let legendY = 40
  groups.forEach(([mu, rows], k) => {
    const color = PALETTE[k % PALETTE.length]
    const t1 = col(rows, 't1')
    const ipt = col(rows, 'I_PT_nats')
    parts.push(polyline(frame, t1, ipt, color))
    if (Number(mu) < 0) {
      // peak marker on the traversable-sign curve
      const peak = ipt.indexOf(Math.max(...ipt))
      parts.push(marker(frame, t1[peak], ipt[peak], color))
    }
    parts.push(
      `<line x1="${WIDTH - 112}" y1="${legendY}" x2="${WIDTH - 92}" y2="${legendY}" stroke="${color}" stroke-width="2"/>`,
      text(WIDTH - 86, legendY + 4, `mu = ${mu}`)
    )
    legendY += 18
  })
  parts.push(text(WIDTH / 2, 18, spec.title ?? 'Teleportation signal', 13, 'middle'))
  return document(WIDTH, HEIGHT, parts.join('\n'))
}

function windingPanel(spec: FigureSpec): string {
  const path = spec.inputs[0]
  const table = readCsv(path)
  requireColumns(table, ['fermion', 't', 'W'], path)
  const groups = [...groupBy(table, 'fermion').entries()]
  const panels = groups.length
  const panelHeight = 130
  const height = 40 + panels * (panelHeight + 38)

  const parts: string[] = []
  groups.forEach(([fermion, rows], k) => {
    // one W value per time: rows repeat per size sector
    const seen = new Map<number, number>()
    for (const row of rows) {
      seen.set(Number(row.t), Number(row.W))
    }
    const times = [...seen.keys()].sort((a, b) => a - b)
    const w = times.map((t) => seen.get(t) as number)
    const frame: Frame = {
      x0: 58,
      y0: 34 + k * (panelHeight + 38),
      width: WIDTH - 58 - 40,
      height: panelHeight,
      xMin: Math.min(...times),
      xMax: Math.max(...times),
      yMin: 0,
      yMax: 1.05,
    }
    parts.push(axes(frame, k === panels - 1 ? 't' : '', 'W'))
    parts.push(polyline(frame, times, w, PALETTE[k % PALETTE.length]))
    parts.push(text(frame.x0 + frame.width - 4, frame.y0 + 12,
                    `fermion ${fermion}`, 11, 'end'))
  })
  parts.push(text(WIDTH / 2, 18, spec.title ?? 'Size-winding quality', 13, 'middle'))
  return document(WIDTH, height, parts.join('\n'))
}

function correlatorRevivals(spec: FigureSpec): string {
  const path = spec.inputs[0]
  const table = readCsv(path)
  requireColumns(table, ['series', 't', 're', 'im'], path)
  const groups = [...groupBy(table, 'series').entries()]
  const allT = col(table.rows, 't')
  const frame = frameFor(allT, [0, 1.05])

  const parts: string[] = [axes(frame, 't', '|C(t)| / |C(0)|')]
  let legendY = 40
  groups.forEach(([series, rows], k) => {
    const color = PALETTE[k % PALETTE.length]
    const t = col(rows, 't')
    const mag = rows.map((r) => Math.hypot(Number(r.re), Number(r.im)))
    const norm = mag[0] || 1
    parts.push(polyline(frame, t, mag.map((m) => m / norm), color))
    parts.push(
      `<line x1="${WIDTH - 112}" y1="${legendY}" x2="${WIDTH - 92}" y2="${legendY}" stroke="${color}" stroke-width="2"/>`,
      text(WIDTH - 86, legendY + 4, series)
    )
    legendY += 18
  })
  parts.push(text(WIDTH / 2, 18, spec.title ?? 'Two-point revivals', 13, 'middle'))
  return document(WIDTH, HEIGHT, parts.join('\n'))
}

function noiseRobustness(spec: FigureSpec): string {
  const path = spec.inputs[0]
  const table = readCsv(path)
  requireColumns(table, ['t1', 'mu', 'p_or_eps', 'kind', 'I_PT'], path)
  // peak height per (kind, magnitude)
  const peaks = new Map<string, Map<number, number>>()
  for (const row of table.rows) {
    const kind = row.kind
    const mag = Number(row.p_or_eps)
    const value = Number(row.I_PT)
    const byMag = peaks.get(kind) ?? new Map<number, number>()
    byMag.set(mag, Math.max(byMag.get(mag) ?? -Infinity, value))
    peaks.set(kind, byMag)
  }
  const allMag: number[] = []
  const allPeak: number[] = []
  for (const byMag of peaks.values()) {
    for (const [m, v] of byMag) {
      allMag.push(m)
      allPeak.push(v)
    }
  }
  const frame = frameFor(allMag, [0, ...allPeak])

  const parts: string[] = [axes(frame, 'noise magnitude (p or epsilon)', 'peak I_PT (nats)')]
  let legendY = 40
  ;[...peaks.entries()].forEach(([kind, byMag], k) => {
    const color = PALETTE[k % PALETTE.length]
    const mags = [...byMag.keys()].sort((a, b) => a - b)
    const values = mags.map((m) => byMag.get(m) as number)
    parts.push(polyline(frame, mags, values, color))
    mags.forEach((m, i) => parts.push(marker(frame, m, values[i], color)))
    parts.push(
      `<line x1="${WIDTH - 112}" y1="${legendY}" x2="${WIDTH - 92}" y2="${legendY}" stroke="${color}" stroke-width="2"/>`,
      text(WIDTH - 86, legendY + 4, kind)
    )
    legendY += 18
  })
  parts.push(text(WIDTH / 2, 18, spec.title ?? 'Noise robustness', 13, 'middle'))
  return document(WIDTH, HEIGHT, parts.join('\n'))
}
