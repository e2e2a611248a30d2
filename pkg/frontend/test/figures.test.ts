// Tests run against golden CSVs produced by the swmoments CLI (see
// fixtures/golden.json for the scenario; the region raster came from
// `swmoments hypregion --model mhswme --N 2 --range=-6,6,-6,6 --res 201`).

import * as assert from 'node:assert/strict';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { test } from 'node:test';

import { regionBoundary, render } from '../src/figures';

const FIXTURES = path.join(__dirname, '..', '..', 'test', 'fixtures');
const REGION_CSV = path.join(FIXTURES, 'mhswme_region_N2.csv');
const ERRORS_CSV = path.join(FIXTURES, 'golden_errors.csv');
const SNAPSHOTS = [
  'golden_swme_N2_snapshot.csv',
  'golden_swme_N3_snapshot.csv',
  'golden_pmhswme_N2_snapshot.csv',
  'golden_pmhswme_N3_snapshot.csv',
  'golden_phswme_N2_snapshot.csv',
].map((f) => path.join(FIXTURES, f));

function tmpOut(name: string): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'swmfig-'));
  return path.join(dir, name);
}

interface Cell { x: number; y: number; w: number; h: number; a1: number; a2: number; v: number; }

function parseCells(svg: string): Cell[] {
  const out: Cell[] = [];
  const re = /<rect class="cell" x="([-\d.]+)" y="([-\d.]+)" width="([-\d.]+)" height="([-\d.]+)" fill="[^"]*" data-a1="([-\d.e]+)" data-a2="([-\d.e]+)" data-v="(\d)"\/>/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(svg)) !== null) {
    out.push({
      x: Number(m[1]), y: Number(m[2]), w: Number(m[3]), h: Number(m[4]),
      a1: Number(m[5]), a2: Number(m[6]), v: Number(m[7]),
    });
  }
  return out;
}

function parseOverlays(svg: string): Array<Array<[number, number]>> {
  const out: Array<Array<[number, number]>> = [];
  const re = /<polyline class="overlay" points="([^"]+)"/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(svg)) !== null) {
    out.push(m[1].split(' ').map((p) => {
      const [x, y] = p.split(',').map(Number);
      return [x, y] as [number, number];
    }));
  }
  return out;
}

test('region raster boundary matches the analytic overlay within 2 pixels', () => {
  const svg = render({
    kind: 'region',
    inputs: [REGION_CSV],
    output: tmpOut('region.svg'),
  });
  const cells = parseCells(svg);
  assert.ok(cells.length > 10000, 'raster cells missing from the SVG');
  const overlays = parseOverlays(svg);
  assert.equal(overlays.length, 2, 'expected upper and lower boundary overlays');
  const upper = overlays.find((pts) => pts[0][1] < 320)!;
  const curveNear = (x: number): number | undefined => {
    let best: [number, number] | undefined;
    for (const pt of upper) {
      if (best === undefined || Math.abs(pt[0] - x) < Math.abs(best[0] - x)) {
        best = pt;
      }
    }
    return best !== undefined && Math.abs(best[0] - x) < 1.5 ? best[1] : undefined;
  };

  // sample columns whose analytic boundary lies inside the scanned window
  const columns = [...new Set(cells.map((c) => c.a1))].sort((a, b) => a - b);
  const sampled = columns.filter((a1, i) => Math.abs(a1) <= 2.4 && i % 5 === 0);
  assert.ok(sampled.length >= 10, 'not enough sampled columns');
  let checked = 0;
  for (const a1 of sampled) {
    const col = cells.filter((c) => c.a1 === a1 && c.a2 > 0).sort((a, b) => a.a2 - b.a2);
    assert.ok(col.length > 0);
    const outermost = col[col.length - 1];
    if (outermost.a2 >= 5.95) continue; // boundary off the top of the window
    const yCurve = curveNear(outermost.x + outermost.w / 2);
    assert.ok(yCurve !== undefined, `no overlay point at column a1=${a1}`);
    // the verdict flips across the top edge of the outermost kept cell
    const yEdge = outermost.y;
    assert.ok(
      Math.abs(yEdge - yCurve!) <= 2.0,
      `column a1=${a1}: raster boundary ${yEdge} vs curve ${yCurve} (> 2 px)`
    );
    checked += 1;
  }
  assert.ok(checked >= 10, `only ${checked} columns carried an in-window boundary`);
});

test('region boundary formula sanity', () => {
  assert.equal(regionBoundary(0), Math.sqrt(5));
  assert.ok(Math.abs(regionBoundary(2) - 5) < 1e-12);
});

test('rendering is deterministic and never mutates its inputs', () => {
  const before = fs.readFileSync(REGION_CSV);
  const a = render({ kind: 'region', inputs: [REGION_CSV], output: tmpOut('a.svg') });
  const b = render({ kind: 'region', inputs: [REGION_CSV], output: tmpOut('b.svg') });
  assert.equal(a, b);
  assert.deepEqual(fs.readFileSync(REGION_CSV), before);
});

test('profiles figure holds one panel per model and one curve per order', () => {
  const svg = render({
    kind: 'profiles',
    inputs: SNAPSHOTS,
    variable: 'h',
    output: tmpOut('profiles.svg'),
  });
  const panels = svg.match(/<g class="panel" data-model="/g) ?? [];
  assert.equal(panels.length, 3); // swme, pmhswme, phswme
  const curves = svg.match(/<polyline class="curve"/g) ?? [];
  assert.equal(curves.length, SNAPSHOTS.length);
  assert.ok(svg.includes('data-model="pmhswme" data-n="3"'));
});

test('profiles of a higher moment skip snapshots that lack the column', () => {
  const svg = render({
    kind: 'profiles',
    inputs: SNAPSHOTS,
    variable: 'alpha_3',
    output: tmpOut('alpha3.svg'),
  });
  // only the N=3 snapshots carry alpha_3
  const curves = svg.match(/<polyline class="curve"/g) ?? [];
  assert.equal(curves.length, 2);
});

test('error-bar figure carries one bar per table row', () => {
  const svg = render({
    kind: 'errorbars',
    inputs: [ERRORS_CSV],
    output: tmpOut('errors.svg'),
  });
  const rows = fs.readFileSync(ERRORS_CSV, 'utf-8').trim().split('\n').length - 1;
  const bars = svg.match(/<rect class="bar"/g) ?? [];
  assert.equal(bars.length, rows);
  const panels = svg.match(/<g class="panel" data-variable="/g) ?? [];
  assert.equal(panels.length, 4); // h, u_m, alpha_1, alpha_2
});

test('empty selection fails instead of writing an empty image', () => {
  assert.throws(() => render({ kind: 'profiles', inputs: [], variable: 'h', output: tmpOut('x.svg') }),
    /empty selection/);
  assert.throws(
    () => render({
      kind: 'profiles', inputs: SNAPSHOTS, variable: 'alpha_9', output: tmpOut('y.svg'),
    }),
    /empty selection/
  );
});

test('schema mismatch is a descriptive failure', () => {
  const bad = tmpOut('bad.csv');
  fs.writeFileSync(bad, 'foo,bar\n1,2\n');
  assert.throws(
    () => render({ kind: 'region', inputs: [bad], output: tmpOut('z.svg') }),
    /lacks column 'a_1'/
  );
  assert.throws(
    () => render({ kind: 'errorbars', inputs: [bad], output: tmpOut('w.svg') }),
    /lacks column 'model'/
  );
});
