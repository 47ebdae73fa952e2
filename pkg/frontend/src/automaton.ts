/**
 * Suffix automaton over token sequences, with earliest-end-position tracking.
 *
 * Mirrors the reference engine exactly: state layout, construction order,
 * frequency accumulation over the suffix-link tree, and top-k successor
 * ranking (frequency descending, token ascending) are all bit-compatible,
 * so match lengths, draft probabilities, and serialized automatons agree
 * token for token.
 */

export const NO_LINK = -1;

const MAGIC = 0x444d4153; // "SAMD" little-endian
const FORMAT_VERSION = 1;
const U32_NONE = 0xffffffff;

export class SamError extends Error {}
export class SerializationError extends SamError {}

export interface SamNode {
  link: number;
  length: number;
  minEndpos: number;
  freq: number;
  next: Map<number, number>;
  topkSucc: Array<[number, number]>;
  topkProb: number[];
}

function newNode(partial: Partial<SamNode> = {}): SamNode {
  return {
    link: NO_LINK,
    length: 0,
    minEndpos: 0,
    freq: 0,
    next: new Map(),
    topkSucc: [],
    topkProb: [],
    ...partial,
  };
}

export interface MatchCursor {
  state: number;
  matchLen: number;
}

export const rootCursor = (): MatchCursor => ({ state: 0, matchLen: 0 });

export class SuffixAutomatonCore {
  nodes: SamNode[] = [newNode()];
  root = 0;
  last = 0;
  maxLength = 0;
  frozen = false;
  separator: number | null;
  vocabSize: number | null;
  reference: number[] = [];
  topk = 0;

  constructor(separator: number | null = null, vocabSize: number | null = null) {
    this.separator = separator;
    this.vocabSize = vocabSize;
  }

  expand(token: number): void {
    if (this.frozen) throw new SamError("cannot expand a frozen automaton");
    const nodes = this.nodes;
    this.maxLength += 1;
    const pos = this.maxLength;
    this.reference.push(token);
    const cur = nodes.length;
    nodes.push(newNode({ length: pos, minEndpos: pos, freq: 1 }));
    let p = this.last;
    while (p !== NO_LINK && !nodes[p].next.has(token)) {
      nodes[p].next.set(token, cur);
      p = nodes[p].link;
    }
    if (p === NO_LINK) {
      nodes[cur].link = this.root;
    } else {
      const q = nodes[p].next.get(token)!;
      if (nodes[p].length + 1 === nodes[q].length) {
        nodes[cur].link = q;
      } else {
        const clone = nodes.length;
        nodes.push(
          newNode({
            link: nodes[q].link,
            length: nodes[p].length + 1,
            minEndpos: nodes[q].minEndpos,
            freq: 0,
            next: new Map(nodes[q].next),
          }),
        );
        while (p !== NO_LINK && nodes[p].next.get(token) === q) {
          nodes[p].next.set(token, clone);
          p = nodes[p].link;
        }
        nodes[q].link = clone;
        nodes[cur].link = clone;
      }
    }
    this.last = cur;
  }

  initTopk(k: number): void {
    if (this.frozen) throw new SamError("initTopk already ran");
    if (k < 1) throw new SamError("k must be positive");
    const nodes = this.nodes;
    const order = Array.from({ length: nodes.length - 1 }, (_, i) => i + 1);
    order.sort((a, b) => nodes[b].length - nodes[a].length);
    for (const i of order) {
      nodes[nodes[i].link].freq += nodes[i].freq;
    }
    for (const node of nodes) {
      if (node.next.size === 0) continue;
      const ranked = [...node.next.entries()].sort(
        (a, b) => nodes[b[1]].freq - nodes[a[1]].freq || a[0] - b[0],
      );
      node.topkSucc = ranked.slice(0, k);
      node.topkProb = node.topkSucc.map(([, v]) => nodes[v].freq / node.freq);
    }
    this.topk = k;
    this.frozen = true;
  }

  transfer(cursor: MatchCursor, token: number): MatchCursor {
    const nodes = this.nodes;
    let { state, matchLen } = cursor;
    while (state !== this.root && !nodes[state].next.has(token)) {
      state = nodes[state].link;
      matchLen = nodes[state].length;
    }
    const target = nodes[state].next.get(token);
    if (target !== undefined) {
      return { state: target, matchLen: matchLen + 1 };
    }
    return { state: this.root, matchLen: 0 };
  }

  /** Re-home a cursor whose state was split by a clone during expand. */
  recanonicalize(cursor: MatchCursor): MatchCursor {
    const nodes = this.nodes;
    let { state, matchLen } = cursor;
    while (state !== this.root && matchLen <= nodes[nodes[state].link].length) {
      state = nodes[state].link;
    }
    return { state, matchLen };
  }
}

export function buildCore(
  tokens: readonly number[],
  separator: number | null = null,
  vocabSize: number | null = null,
): SuffixAutomatonCore {
  const core = new SuffixAutomatonCore(separator, vocabSize);
  for (const t of tokens) core.expand(t);
  return core;
}

class Reader {
  offset = 0;
  constructor(private view: DataView) {}

  private need(bytes: number): number {
    if (this.offset + bytes > this.view.byteLength) {
      throw new SerializationError("truncated input");
    }
    const at = this.offset;
    this.offset += bytes;
    return at;
  }

  u8(): number {
    return this.view.getUint8(this.need(1));
  }
  u32(): number {
    return this.view.getUint32(this.need(4), true);
  }
  u64(): number {
    const lo = this.u32();
    const hi = this.u32();
    const value = hi * 0x1_0000_0000 + lo;
    if (!Number.isSafeInteger(value)) {
      throw new SerializationError("frequency exceeds the safe integer range");
    }
    return value;
  }
  f64(): number {
    return this.view.getFloat64(this.need(8), true);
  }
  done(): boolean {
    return this.offset === this.view.byteLength;
  }
}

/** Parse the versioned little-endian container written by the reference engine. */
export function loadSamd(data: Uint8Array): SuffixAutomatonCore {
  const reader = new Reader(new DataView(data.buffer, data.byteOffset, data.byteLength));
  if (reader.u32() !== MAGIC) throw new SerializationError("bad magic");
  const version = reader.u32();
  if (version !== FORMAT_VERSION) {
    throw new SerializationError(`unsupported format version ${version}`);
  }
  if (reader.u8() !== 0) throw new SerializationError("unsupported flavor byte");
  const vocabSize = reader.u32();
  const separator = reader.u32();
  const maxLength = reader.u32();
  const nodeCount = reader.u32();
  const core = new SuffixAutomatonCore(
    separator === U32_NONE ? null : separator,
    vocabSize || null,
  );
  core.maxLength = maxLength;
  core.nodes = [];
  const checkIndex = (value: number): number => {
    if (value >= nodeCount) throw new SerializationError(`dangling node index ${value}`);
    return value;
  };
  for (let i = 0; i < nodeCount; i++) {
    const link = reader.u32();
    const node = newNode({
      link: link === U32_NONE ? NO_LINK : checkIndex(link),
      length: reader.u32(),
      minEndpos: reader.u32(),
      freq: reader.u64(),
    });
    if (i === 0 && node.link !== NO_LINK) {
      throw new SerializationError("root must have no suffix link");
    }
    const nNext = reader.u32();
    for (let j = 0; j < nNext; j++) {
      const token = reader.u32();
      node.next.set(token, checkIndex(reader.u32()));
    }
    const nTopk = reader.u32();
    for (let j = 0; j < nTopk; j++) {
      const token = reader.u32();
      const target = checkIndex(reader.u32());
      node.topkSucc.push([token, target]);
      node.topkProb.push(reader.f64());
    }
    core.nodes.push(node);
  }
  if (core.nodes.length === 0) throw new SerializationError("empty node pool");
  core.reference = [];
  for (let i = 0; i < maxLength; i++) core.reference.push(reader.u32());
  if (!reader.done()) throw new SerializationError("trailing bytes after reference");
  core.frozen = true;
  core.topk = Math.max(0, ...core.nodes.map((n) => n.topkSucc.length));
  return core;
}
