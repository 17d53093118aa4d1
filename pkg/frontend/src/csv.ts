import { readFileSync } from 'fs'
import Papa from 'papaparse'

export interface Table {
  columns: string[]
  rows: Record<string, string>[]
}

export class SchemaError extends Error {}

export function readCsv(path: string): Table {
  const text = readFileSync(path, 'utf8')
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  })
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`)
  }
  const columns = parsed.meta.fields ?? []
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`)
  }
  return { columns, rows: parsed.data }
}

export function requireColumns(table: Table, needed: string[], path: string): void {
  const missing = needed.filter((c) => !table.columns.includes(c))
  if (missing.length > 0) {
    throw new SchemaError(
      `${path}: missing column(s) ${missing.join(', ')} ` +
      `(found: ${table.columns.join(', ')})`
    )
  }
}

export function numbers(table: Table, column: string): number[] {
  return table.rows.map((row) => {
    const value = Number(row[column])
    if (!Number.isFinite(value) && row[column] !== undefined) {
      // non-numeric cells (e.g. the noise `kind` column) are caught by callers
      return NaN
    }
    return value
  })
}
