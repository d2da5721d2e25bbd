/** ROC sweep matching the producing library's semantics.
 *
 * Thresholds walk the distinct scores from high to low, items sharing a
 * score enter together, and the AUC is the trapezoid area under the
 * (FPR, TPR) polyline. Legends recompute AUC from the raw rows so the
 * figures can be checked against the solver side to three decimals.
 */

export interface RocPoint {
  threshold: number;
  fpr: number;
  tpr: number;
}

export interface Roc {
  points: RocPoint[];
  auc: number;
}

export function rocCurve(items: Array<{ score: number; label: boolean }>): Roc {
  if (items.length === 0) {
    throw new Error("cannot build a ROC from no items");
  }
  const nPos = items.filter((it) => it.label).length;
  const nNeg = items.length - nPos;
  if (nPos === 0 || nNeg === 0) {
    throw new Error(
      `ROC needs both label classes (got ${nPos} positives, ${nNeg} negatives)`,
    );
  }
  const sorted = [...items].sort((a, b) => b.score - a.score);
  const points: RocPoint[] = [{ threshold: Infinity, fpr: 0, tpr: 0 }];
  let tp = 0;
  let fp = 0;
  let i = 0;
  while (i < sorted.length) {
    const threshold = sorted[i]!.score;
    while (i < sorted.length && sorted[i]!.score === threshold) {
      if (sorted[i]!.label) {
        tp += 1;
      } else {
        fp += 1;
      }
      i += 1;
    }
    points.push({ threshold, fpr: fp / nNeg, tpr: tp / nPos });
  }
  let auc = 0;
  for (let k = 1; k < points.length; k++) {
    const a = points[k - 1]!;
    const b = points[k]!;
    auc += ((b.fpr - a.fpr) * (a.tpr + b.tpr)) / 2;
  }
  return { points, auc };
}
