// CSV loading with header validation for the swmoments CLI output schemas.

import * as fs from 'node:fs';

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

export function readCsv(path: string): Table {
  let text: string;
  try {
    text = fs.readFileSync(path, 'utf-8');
  } catch (err) {
    throw new Error(`cannot read CSV '${path}': ${(err as Error).message}`);
  }
  const lines = text.split('\n').filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new Error(`CSV '${path}' has no data rows`);
  }
  const header = lines[0].split(',');
  const rows = lines.slice(1).map((l) => l.split(','));
  return { path, header, rows };
}

/** Fail with a descriptive message unless every named column is present. */
export function requireColumns(table: Table, columns: string[], what: string): void {
  for (const col of columns) {
    if (!table.header.includes(col)) {
      throw new Error(
        `${what}: '${table.path}' lacks column '${col}' ` +
        `(found: ${table.header.join(', ')})`
      );
    }
  }
}

export function column(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`'${table.path}' lacks column '${name}'`);
  }
  return table.rows.map((r) => r[idx]);
}

export function numbers(table: Table, name: string): number[] {
  return column(table, name).map((v) => {
    const x = Number(v);
    if (!Number.isFinite(x)) {
      throw new Error(`non-numeric value '${v}' in column '${name}' of '${table.path}'`);
    }
    return x;
  });
}
