import { writeFileSync } from 'fs'
import yargs from 'yargs'
import { hideBin } from 'yargs/helpers'
import { SchemaError } from './csv.js'
import { FigureKind, render } from './figures.js'

const KINDS: FigureKind[] = [
  'teleport_curves',
  'winding_panel',
  'correlator_revivals',
  'noise_robustness',
]

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option('kind', { choices: KINDS, demandOption: true, type: 'string' })
    .option('in', { demandOption: true, type: 'string', array: true })
    .option('out', { demandOption: true, type: 'string' })
    .option('title', { type: 'string' })
    .strict()
    .parseSync()

  try {
    const svg = render({
      kind: args.kind as FigureKind,
      inputs: args.in as string[],
      title: args.title,
    })
    writeFileSync(args.out, svg, 'utf8')
    console.log(`wrote ${args.out}`)
    return 0
  } catch (err) {
    if (err instanceof SchemaError || err instanceof Error) {
      console.error(`error: ${err.message}`)
      return 1
    }
    throw err
  }
}

const invokedDirectly = process.argv[1]?.endsWith('render.js')
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)))
}
