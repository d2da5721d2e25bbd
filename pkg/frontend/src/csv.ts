/** Minimal reader for the benchmark result tables.
 *
 * The producing side writes plain comma-separated values with a fixed
 * header and no quoting, so splitting is enough here.
 */

export type Row = Record<string, string>;

export function parseCsv(text: string): Row[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV input");
  }
  const header = lines[0]!.split(",");
  return lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(`CSV row ${i + 2} has ${cells.length} cells, expected ${header.length}`);
    }
    const row: Row = {};
    header.forEach((name, j) => {
      row[name] = cells[j]!;
    });
    return row;
  });
}

export function requireColumns(rows: Row[], columns: string[], what: string): void {
  if (rows.length === 0) {
    throw new Error(`${what}: no data rows`);
  }
  const have = Object.keys(rows[0]!);
  const missing = columns.filter((c) => !have.includes(c));
  if (missing.length > 0) {
    throw new Error(`${what}: missing columns ${missing.join(", ")} (have ${have.join(", ")})`);
  }
}

export function num(row: Row, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new Error(`column ${column}: cannot parse ${JSON.stringify(row[column])} as a number`);
  }
  return value;
}
