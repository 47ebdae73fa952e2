/**
 * Token-recycling style auxiliary drafter: per-token recency rows of the k
 * most recent successors, drafted as a fixed-shape breadth-first tree.
 */

import { AUXILIARY, Draft } from "./drafting.js";

export const DEFAULT_TREE_SHAPE: readonly number[] = [4, 2, 2, 1, 1];

export class RecycleTable {
  readonly k: number;
  rows = new Map<number, number[]>();

  constructor(k = 8) {
    if (k < 1) throw new Error("k must be positive");
    this.k = k;
  }

  observe(context: readonly number[]): void {
    for (let i = 0; i + 1 < context.length; i++) {
      const a = context[i];
      const b = context[i + 1];
      const row = this.rows.get(a);
      if (row === undefined) {
        this.rows.set(a, [b]);
        continue;
      }
      if (row[0] === b) continue;
      const existing = row.indexOf(b);
      if (existing >= 0) row.splice(existing, 1);
      row.unshift(b);
      if (row.length > this.k) row.length = this.k;
    }
  }

  draftBfs(
    lastToken: number,
    shape: readonly number[] = DEFAULT_TREE_SHAPE,
    score = 0,
  ): Draft | null {
    const rootRow = this.rows.get(lastToken);
    if (!rootRow || rootRow.length === 0) return null;
    const tokens: number[] = [];
    const parents: number[] = [];
    let frontier: Array<[number, number]> = [[lastToken, -1]];
    for (const width of shape) {
      const next: Array<[number, number]> = [];
      for (const [token, slot] of frontier) {
        const row = this.rows.get(token) ?? [];
        for (const child of row.slice(0, width)) {
          tokens.push(child);
          parents.push(slot);
          next.push([child, tokens.length - 1]);
        }
      }
      frontier = next;
      if (frontier.length === 0) break;
    }
    return { tokens, parents, source: AUXILIARY, score };
  }
}
