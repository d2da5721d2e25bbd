/** Gaussian kernel density with Scott's bandwidth (deterministic). */

export function scottBandwidth(values: number[]): number {
  const n = values.length;
  const mean = values.reduce((a, b) => a + b, 0) / n;
  const variance = values.reduce((a, b) => a + (b - mean) ** 2, 0) / Math.max(n - 1, 1);
  const sd = Math.sqrt(variance);
  const bw = 1.06 * sd * Math.pow(n, -1 / 5);
  return bw > 0 ? bw : 1e-3;
}

export function kdeOnGrid(values: number[], grid: number[], bandwidth: number): number[] {
  const norm = 1 / (values.length * bandwidth * Math.sqrt(2 * Math.PI));
  return grid.map((g) => {
    let total = 0;
    for (const v of values) {
      const z = (g - v) / bandwidth;
      total += Math.exp(-0.5 * z * z);
    }
    return total * norm;
  });
}
