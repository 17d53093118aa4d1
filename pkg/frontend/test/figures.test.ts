import { createHash } from 'crypto'
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { dirname, join } from 'path'
import { fileURLToPath } from 'url'
import { describe, expect, it } from 'vitest'
import { render } from '../src/figures.js'
import { main } from '../src/render.js'

const here = dirname(fileURLToPath(import.meta.url))
const fixture = (name: string) => join(here, '..', 'fixtures', name)
const golden = (name: string) => join(here, '..', 'golden', name)

const sha = (s: string) => createHash('sha256').update(s).digest('hex')

describe('golden renders', () => {
  it('teleport_curves matches the committed golden file', () => {
    const svg = render({ kind: 'teleport_curves', inputs: [fixture('teleport.csv')] })
    expect(sha(svg)).toBe(sha(readFileSync(golden('teleport_curves.svg'), 'utf8')))
  })

  it('winding_panel matches the committed golden file', () => {
    const svg = render({ kind: 'winding_panel', inputs: [fixture('winding.csv')] })
    expect(sha(svg)).toBe(sha(readFileSync(golden('winding_panel.svg'), 'utf8')))
  })

  it('rendering is deterministic across calls', () => {
    const spec = { kind: 'teleport_curves' as const, inputs: [fixture('teleport.csv')] }
    expect(render(spec)).toBe(render(spec))
  })
})

describe('figure content', () => {
  it('teleport_curves draws two labeled curves with a peak marker', () => {
    const svg = render({ kind: 'teleport_curves', inputs: [fixture('teleport.csv')] })
    expect(svg).toContain('mu = -12')
    expect(svg).toContain('mu = 12')
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2)
    expect(svg).toContain('<circle')  // peak marker on the mu = -12 curve
  })

  it('winding_panel shows one subpanel per fermion', () => {
    const svg = render({ kind: 'winding_panel', inputs: [fixture('winding.csv')] })
    for (const label of ['fermion 1', 'fermion 4', 'fermion 7']) {
      expect(svg).toContain(label)
    }
  })

  it('correlator_revivals renders each series', () => {
    const svg = render({
      kind: 'correlator_revivals',
      inputs: [fixture('correlators.csv')],
    })
    expect(svg).toContain('j1')
    expect(svg).toContain('avg')
  })

  it('noise_robustness summarizes both noise kinds', () => {
    const svg = render({ kind: 'noise_robustness', inputs: [fixture('noise.csv')] })
    expect(svg).toContain('depolarizing')
    expect(svg).toContain('coherent')
  })
})

describe('error paths', () => {
  it('rejects a CSV with the wrong schema, naming the columns', () => {
    expect(() =>
      render({ kind: 'teleport_curves', inputs: [fixture('winding.csv')] })
    ).toThrowError(/missing column\(s\) t1, mu, I_PT_nats/)
  })

  it('rejects an empty CSV and writes no file', () => {
    const dir = mkdtempSync(join(tmpdir(), 'figs-'))
    const empty = join(dir, 'empty.csv')
    writeFileSync(empty, 't1,mu,I_PT_nats,I_PT_bits\n')
    const out = join(dir, 'out.svg')
    const code = main(['--kind', 'teleport_curves', '--in', empty, '--out', out])
    expect(code).toBe(1)
    expect(existsSync(out)).toBe(false)
  })

  it('cli writes a file on success', () => {
    const dir = mkdtempSync(join(tmpdir(), 'figs-'))
    const out = join(dir, 'fig.svg')
    const code = main([
      '--kind', 'teleport_curves', '--in', fixture('teleport.csv'), '--out', out,
    ])
    expect(code).toBe(0)
    expect(readFileSync(out, 'utf8')).toContain('<svg')
  })
})
