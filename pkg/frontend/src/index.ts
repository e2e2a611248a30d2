// Entry point: library exports plus a tiny file-driven runner so figures can
// be produced from a JSON spec: `node dist/src/index.js figure-spec.json`.

import * as fs from 'node:fs';

import { FigureSpec, render } from './figures';

export { render, regionBoundary } from './figures';
export type { FigureSpec, FigureKind } from './figures';
export { readCsv, requireColumns } from './csv';

function main(argv: string[]): number {
  if (argv.length !== 1) {
    process.stderr.write('usage: node index.js <figure-spec.json>\n');
    return 1;
  }
  let spec: FigureSpec;
  try {
    spec = JSON.parse(fs.readFileSync(argv[0], 'utf-8')) as FigureSpec;
  } catch (err) {
    process.stderr.write(`bad figure spec: ${(err as Error).message}\n`);
    return 1;
  }
  try {
    render(spec);
    process.stdout.write(`${spec.output}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`render failed: ${(err as Error).message}\n`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
