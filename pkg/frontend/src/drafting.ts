/**
 * Draft extraction: reference slices after the matched suffix, and greedy
 * max-probability tree expansion over top-k successors.
 *
 * Draft parents convention: parents[i] < i, and -1 means the parent is the
 * last already-emitted context token (the tree anchor).
 */

import { MatchCursor, SamError, SuffixAutomatonCore } from "./automaton.js";

export const DYNAMIC_SAM = "dynamic_sam";
export const STATIC_SAM = "static_sam";
export const AUXILIARY = "auxiliary";

export interface Draft {
  tokens: number[];
  parents: number[];
  source: string;
  score: number;
}

interface PrimItem {
  negProb: number;
  token: number;
  seq: number;
  pathProb: number;
  state: number;
  parentSlot: number;
}

function primLess(a: PrimItem, b: PrimItem): boolean {
  if (a.negProb !== b.negProb) return a.negProb < b.negProb;
  if (a.token !== b.token) return a.token < b.token;
  return a.seq < b.seq;
}

/** Binary min-heap over the (negProb, token, seq) total order. */
class PrimHeap {
  private items: PrimItem[] = [];

  get size(): number {
    return this.items.length;
  }

  push(item: PrimItem): void {
    const items = this.items;
    items.push(item);
    let i = items.length - 1;
    while (i > 0) {
      const parent = (i - 1) >> 1;
      if (!primLess(items[i], items[parent])) break;
      [items[i], items[parent]] = [items[parent], items[i]];
      i = parent;
    }
  }

  pop(): PrimItem {
    const items = this.items;
    const top = items[0];
    const tail = items.pop()!;
    if (items.length > 0) {
      items[0] = tail;
      let i = 0;
      for (;;) {
        const left = 2 * i + 1;
        const right = left + 1;
        let best = i;
        if (left < items.length && primLess(items[left], items[best])) best = left;
        if (right < items.length && primLess(items[right], items[best])) best = right;
        if (best === i) break;
        [items[i], items[best]] = [items[best], items[i]];
        i = best;
      }
    }
    return top;
  }
}

export function draftLinear(
  sam: SuffixAutomatonCore,
  cursor: MatchCursor,
  n: number,
  source: string = DYNAMIC_SAM,
): Draft | null {
  if (n < 1) throw new SamError("draft length must be positive");
  if (cursor.matchLen < 1) return null;
  const start = sam.nodes[cursor.state].minEndpos;
  let tokens = sam.reference.slice(start, start + n);
  if (sam.separator !== null) {
    const cut = tokens.indexOf(sam.separator);
    if (cut >= 0) tokens = tokens.slice(0, cut);
  }
  if (tokens.length === 0) return null;
  return {
    tokens,
    parents: tokens.map((_, i) => i - 1),
    source,
    score: cursor.matchLen,
  };
}

export function draftTree(
  sam: SuffixAutomatonCore,
  cursor: MatchCursor,
  anchor: number,
  maxSize: number,
  source: string = STATIC_SAM,
): Draft | null {
  if (!sam.frozen) throw new SamError("draftTree requires a frozen automaton");
  if (maxSize < 1) throw new SamError("maxSize must be positive");
  if (cursor.matchLen < 1) return null;
  let counter = 0;
  const heap = new PrimHeap();
  heap.push({
    negProb: -1.0,
    token: anchor,
    seq: counter,
    pathProb: 1.0,
    state: cursor.state,
    parentSlot: -1,
  });
  const popped: Array<[number, number]> = [];
  while (heap.size > 0 && popped.length < maxSize) {
    const item = heap.pop();
    const slot = popped.length;
    popped.push([item.token, item.parentSlot]);
    const node = sam.nodes[item.state];
    for (let i = 0; i < node.topkSucc.length; i++) {
      const [token, target] = node.topkSucc[i];
      if (token === sam.separator) continue;
      counter += 1;
      const pathProb = item.pathProb * node.topkProb[i];
      heap.push({
        negProb: -pathProb,
        token,
        seq: counter,
        pathProb,
        state: target,
        parentSlot: slot,
      });
    }
  }
  if (popped.length <= 1) return null;
  return {
    tokens: popped.slice(1).map(([t]) => t),
    parents: popped.slice(1).map(([, p]) => p - 1),
    source,
    score: cursor.matchLen,
  };
}
