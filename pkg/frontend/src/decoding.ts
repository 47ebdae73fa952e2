/**
 * Adaptive draft selection and greedy verification, mirroring the reference
 * decode loop step for step: same effective-score rule, same tie-breaks,
 * same update order (transfer before expand), same metrics arithmetic.
 */

import {
  MatchCursor,
  SamError,
  SuffixAutomatonCore,
  rootCursor,
} from "./automaton.js";
import {
  AUXILIARY,
  DYNAMIC_SAM,
  Draft,
  STATIC_SAM,
  draftLinear,
  draftTree,
} from "./drafting.js";
import { DEFAULT_TREE_SHAPE, RecycleTable } from "./recycling.js";

export const FALLBACK = "fallback";

export const DRAFT_LEN_DEFAULT = 40;
export const DRAFT_LEN_CODE = 16;

export type Oracle = (context: readonly number[]) => number | null;

export function replayOracle(target: readonly number[], promptLen: number): Oracle {
  return (context) => {
    const i = context.length - promptLen;
    if (i < 0) throw new Error("context shorter than the declared prompt");
    return i < target.length ? target[i] : null;
  };
}

export function ngramOracle(order: number, docs: readonly (readonly number[])[]): Oracle {
  if (order < 1) throw new Error("order must be >= 1");
  const counts = new Map<string, Map<number, number>>();
  for (const doc of docs) {
    for (let i = 0; i + order < doc.length; i++) {
      const key = doc.slice(i, i + order).join(",");
      const next = doc[i + order];
      let bucket = counts.get(key);
      if (!bucket) counts.set(key, (bucket = new Map()));
      bucket.set(next, (bucket.get(next) ?? 0) + 1);
    }
  }
  const best = new Map<string, number>();
  for (const [key, bucket] of counts) {
    let bestToken = -1;
    let bestCount = -1;
    for (const [token, count] of bucket) {
      if (count > bestCount || (count === bestCount && token < bestToken)) {
        bestToken = token;
        bestCount = count;
      }
    }
    best.set(key, bestToken);
  }
  return (context) => {
    if (context.length < order) return null;
    const key = context.slice(context.length - order).join(",");
    return best.get(key) ?? null;
  };
}

export interface DecodeConfig {
  draftLen?: number | null;
  profile?: "default" | "code";
  treeMaxSize?: number | null;
  lBias?: number | null;
  lThreshold?: number;
  maxNewTokens?: number;
  useDynamic?: boolean;
  useStatic?: boolean;
  useAux?: boolean;
  recycleK?: number;
  treeShape?: readonly number[];
}

interface ResolvedConfig {
  draftLen: number;
  treeMaxSize: number;
  lBias: number | null;
  lThreshold: number;
  maxNewTokens: number;
  useDynamic: boolean;
  useStatic: boolean;
  useAux: boolean;
  recycleK: number;
  treeShape: readonly number[];
}

function resolve(config: DecodeConfig): ResolvedConfig {
  const draftLen =
    config.draftLen ?? (config.profile === "code" ? DRAFT_LEN_CODE : DRAFT_LEN_DEFAULT);
  return {
    draftLen,
    treeMaxSize: config.treeMaxSize ?? draftLen,
    lBias: config.lBias ?? null,
    lThreshold: config.lThreshold ?? 5,
    maxNewTokens: config.maxNewTokens ?? 512,
    useDynamic: config.useDynamic ?? true,
    useStatic: config.useStatic ?? true,
    useAux: config.useAux ?? true,
    recycleK: config.recycleK ?? 8,
    treeShape: config.treeShape ?? DEFAULT_TREE_SHAPE,
  };
}

export function selectDraft(
  lStatic: number,
  lDynamic: number,
  available: readonly string[],
  lBias: number,
  lThreshold: number,
): string | null {
  const ranked: Array<[number, number, string]> = [];
  if (available.includes(DYNAMIC_SAM)) ranked.push([lDynamic, 2, DYNAMIC_SAM]);
  if (available.includes(STATIC_SAM)) ranked.push([lStatic - lBias, 1, STATIC_SAM]);
  if (available.includes(AUXILIARY)) ranked.push([lThreshold, 0, AUXILIARY]);
  if (ranked.length === 0) return null;
  ranked.sort((a, b) => b[0] - a[0] || b[1] - a[1]);
  return ranked[0][2];
}

export interface VerifyResult {
  emitted: number[];
  accepted: number;
  done: boolean;
}

export function verifyLinear(
  oracle: Oracle,
  context: readonly number[],
  tokens: readonly number[],
): VerifyResult {
  const emitted: number[] = [];
  let accepted = 0;
  const work = [...context];
  for (const t of tokens) {
    const expected = oracle(work);
    if (expected === null) return { emitted, accepted, done: true };
    emitted.push(expected);
    if (expected !== t) return { emitted, accepted, done: false };
    accepted += 1;
    work.push(expected);
  }
  const bonus = oracle(work);
  if (bonus === null) return { emitted, accepted, done: true };
  emitted.push(bonus);
  return { emitted, accepted, done: false };
}

export function verifyTree(
  oracle: Oracle,
  context: readonly number[],
  draft: Draft,
): VerifyResult {
  const children = new Map<number, number[]>();
  draft.parents.forEach((parent, i) => {
    const bucket = children.get(parent);
    if (bucket) bucket.push(i);
    else children.set(parent, [i]);
  });
  const emitted: number[] = [];
  let accepted = 0;
  const work = [...context];
  let slot = -1;
  for (;;) {
    const expected = oracle(work);
    if (expected === null) return { emitted, accepted, done: true };
    emitted.push(expected);
    const step = (children.get(slot) ?? []).find((c) => draft.tokens[c] === expected);
    if (step === undefined) return { emitted, accepted, done: false };
    accepted += 1;
    work.push(expected);
    slot = step;
  }
}

export function plainDecode(
  prompt: readonly number[],
  oracle: Oracle,
  maxNewTokens: number,
): number[] {
  const out: number[] = [];
  const context = [...prompt];
  while (out.length < maxNewTokens) {
    const token = oracle(context);
    if (token === null) break;
    out.push(token);
    context.push(token);
  }
  return out;
}

export interface DecodeMetrics {
  steps: number;
  total_tokens: number;
  mat: number;
  source_steps: Record<string, number>;
  source_tokens: Record<string, number>;
  source_share: Record<string, number>;
  per_source_mat: Record<string, number>;
}

export class Session {
  private config: ResolvedConfig;
  private staticSam: SuffixAutomatonCore | null;
  private dynamic: SuffixAutomatonCore | null;
  private table: RecycleTable | null;
  private staticCursor: MatchCursor = rootCursor();
  private dynamicCursor: MatchCursor = rootCursor();
  private context: number[] = [];

  constructor(config: DecodeConfig = {}, staticSam: SuffixAutomatonCore | null = null) {
    this.config = resolve(config);
    if (staticSam !== null && !staticSam.frozen) {
      throw new SamError("static automaton must be frozen before decoding");
    }
    this.staticSam = this.config.useStatic ? staticSam : null;
    this.dynamic = this.config.useDynamic ? new SuffixAutomatonCore() : null;
    this.table = this.config.useAux ? new RecycleTable(this.config.recycleK) : null;
  }

  feed(tokens: readonly number[]): void {
    for (const t of tokens) {
      if (this.staticSam !== null) {
        this.staticCursor = this.staticSam.transfer(this.staticCursor, t);
      }
      if (this.dynamic !== null) {
        this.dynamicCursor = this.dynamic.transfer(this.dynamicCursor, t);
        this.dynamic.expand(t);
        this.dynamicCursor = this.dynamic.recanonicalize(this.dynamicCursor);
      }
    }
    if (this.table !== null && tokens.length > 0) {
      const boundary = this.context.length ? [this.context[this.context.length - 1]] : [];
      this.table.observe([...boundary, ...tokens]);
    }
    this.context.push(...tokens);
  }

  propose(): Map<string, Draft> {
    const cfg = this.config;
    const drafts = new Map<string, Draft>();
    if (this.dynamic !== null && this.dynamicCursor.matchLen >= 1) {
      const d = draftLinear(this.dynamic, this.dynamicCursor, cfg.draftLen);
      if (d) drafts.set(DYNAMIC_SAM, d);
    }
    if (this.staticSam !== null && this.staticCursor.matchLen >= 1 && this.context.length) {
      const d = draftTree(
        this.staticSam,
        this.staticCursor,
        this.context[this.context.length - 1],
        cfg.treeMaxSize,
      );
      if (d) drafts.set(STATIC_SAM, d);
    }
    if (this.table !== null && this.context.length) {
      const d = this.table.draftBfs(
        this.context[this.context.length - 1],
        cfg.treeShape,
        cfg.lThreshold,
      );
      if (d) drafts.set(AUXILIARY, d);
    }
    return drafts;
  }

  decode(prompt: readonly number[], oracle: Oracle): { ids: number[]; metrics: DecodeMetrics } {
    this.feed(prompt);
    const cfg = this.config;
    const lBias = cfg.lBias ?? (this.table !== null ? 5 : 0);
    const output: number[] = [];
    let steps = 0;
    let totalTokens = 0;
    const sourceSteps: Record<string, number> = {};
    const sourceTokens: Record<string, number> = {};
    while (output.length < cfg.maxNewTokens) {
      const drafts = this.propose();
      const source = selectDraft(
        this.staticCursor.matchLen,
        this.dynamicCursor.matchLen,
        [...drafts.keys()],
        lBias,
        cfg.lThreshold,
      );
      let emitted: number[];
      let done: boolean;
      let outcomeSource: string;
      if (source === null) {
        const token = oracle(this.context);
        if (token === null) break;
        emitted = [token];
        done = false;
        outcomeSource = FALLBACK;
      } else {
        const draft = drafts.get(source)!;
        const result =
          source === DYNAMIC_SAM
            ? verifyLinear(oracle, this.context, draft.tokens)
            : verifyTree(oracle, this.context, draft);
        emitted = result.emitted;
        done = result.done;
        outcomeSource = source;
      }
      const room = cfg.maxNewTokens - output.length;
      if (emitted.length > room) emitted = emitted.slice(0, room);
      if (emitted.length > 0) {
        this.feed(emitted);
        output.push(...emitted);
        steps += 1;
        totalTokens += emitted.length;
        sourceSteps[outcomeSource] = (sourceSteps[outcomeSource] ?? 0) + 1;
        sourceTokens[outcomeSource] = (sourceTokens[outcomeSource] ?? 0) + emitted.length;
      }
      if (done) break;
    }
    const share: Record<string, number> = {};
    const perSource: Record<string, number> = {};
    for (const [s, n] of Object.entries(sourceSteps)) {
      share[s] = n / steps;
      perSource[s] = sourceTokens[s] / n;
    }
    return {
      ids: output,
      metrics: {
        steps,
        total_tokens: totalTokens,
        mat: steps ? totalTokens / steps : 0.0,
        source_steps: sourceSteps,
        source_tokens: sourceTokens,
        source_share: share,
        per_source_mat: perSource,
      },
    };
  }
}
