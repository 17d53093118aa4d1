// Minimal deterministic SVG plot primitives: fixed dimensions, fixed fonts,
// coordinates rounded so output bytes depend only on the input data.

export interface Frame {
  x0: number
  y0: number
  width: number
  height: number
  xMin: number
  xMax: number
  yMin: number
  yMax: number
}

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

const fmt = (v: number): string => {
  const r = Math.round(v * 100) / 100
  return Object.is(r, -0) ? '0' : String(r)
}

export function scaleX(frame: Frame, x: number): number {
  const span = frame.xMax - frame.xMin || 1
  return frame.x0 + ((x - frame.xMin) / span) * frame.width
}

export function scaleY(frame: Frame, y: number): number {
  const span = frame.yMax - frame.yMin || 1
  return frame.y0 + frame.height - ((y - frame.yMin) / span) * frame.height
}

export function polyline(frame: Frame, xs: number[], ys: number[], color: string,
                         width = 1.5): string {
  const points = xs
    .map((x, i) => `${fmt(scaleX(frame, x))},${fmt(scaleY(frame, ys[i]))}`)
    .join(' ')
  return `<polyline fill="none" stroke="${color}" stroke-width="${width}" points="${points}"/>`
}

export function marker(frame: Frame, x: number, y: number, color: string): string {
  return `<circle cx="${fmt(scaleX(frame, x))}" cy="${fmt(scaleY(frame, y))}" r="4" ` +
    `fill="none" stroke="${color}" stroke-width="1.5"/>`
}

export function text(x: number, y: number, content: string, size = 11,
                     anchor = 'start'): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica,Arial,sans-serif" ` +
    `font-size="${size}" text-anchor="${anchor}">${escapeXml(content)}</text>`
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo]
  const step = niceStep((hi - lo) / count)
  const start = Math.ceil(lo / step) * step
  const out: number[] = []
  for (let v = start; v <= hi + 1e-12; v += step) {
    out.push(Math.round(v / step) * step)
  }
  return out
}

function niceStep(raw: number): number {
  const power = Math.pow(10, Math.floor(Math.log10(raw)))
  const unit = raw / power
  const nice = unit >= 5 ? 5 : unit >= 2 ? 2 : 1
  return nice * power
}

export function tickLabel(v: number): string {
  const r = Math.round(v * 1000) / 1000
  return Object.is(r, -0) ? '0' : String(r)
}

export function axes(frame: Frame, xLabel: string, yLabel: string): string {
  const parts: string[] = []
  const bottom = frame.y0 + frame.height
  parts.push(`<line x1="${fmt(frame.x0)}" y1="${fmt(bottom)}" x2="${fmt(frame.x0 + frame.width)}" y2="${fmt(bottom)}" stroke="#333" stroke-width="1"/>`)
  parts.push(`<line x1="${fmt(frame.x0)}" y1="${fmt(frame.y0)}" x2="${fmt(frame.x0)}" y2="${fmt(bottom)}" stroke="#333" stroke-width="1"/>`)
  for (const v of ticks(frame.xMin, frame.xMax)) {
    const x = scaleX(frame, v)
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(bottom)}" x2="${fmt(x)}" y2="${fmt(bottom + 4)}" stroke="#333" stroke-width="1"/>`)
    parts.push(text(x, bottom + 16, tickLabel(v), 10, 'middle'))
  }
  for (const v of ticks(frame.yMin, frame.yMax)) {
    const y = scaleY(frame, v)
    parts.push(`<line x1="${fmt(frame.x0 - 4)}" y1="${fmt(y)}" x2="${fmt(frame.x0)}" y2="${fmt(y)}" stroke="#333" stroke-width="1"/>`)
    parts.push(text(frame.x0 - 7, y + 3, tickLabel(v), 10, 'end'))
  }
  parts.push(text(frame.x0 + frame.width / 2, bottom + 32, xLabel, 12, 'middle'))
  parts.push(
    `<text x="14" y="${fmt(frame.y0 + frame.height / 2)}" font-family="Helvetica,Arial,sans-serif" ` +
    `font-size="12" text-anchor="middle" transform="rotate(-90 14 ${fmt(frame.y0 + frame.height / 2)})">${escapeXml(yLabel)}</text>`
  )
  return parts.join('\n')
}

export function document(width: number, height: number, body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
}

export function padRange(lo: number, hi: number): [number, number] {
  if (!(hi > lo)) return [lo - 1, hi + 1]
  const pad = 0.06 * (hi - lo)
  return [lo - pad, hi + pad]
}
