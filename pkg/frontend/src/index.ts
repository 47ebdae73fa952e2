/**
 * Embedding surface for the suffix-automaton drafting engine.
 *
 * StaticSam wraps a frozen corpus automaton (loaded from a .samd file or
 * built from token ids) and tracks its own match cursor; DynamicSam wraps a
 * growing automaton over live text.  Session runs the full adaptive
 * drafting + greedy verification loop against an oracle callback.  All
 * results are bit-identical to the reference engine on the same inputs.
 */

import { readFileSync } from "node:fs";

import {
  MatchCursor,
  SuffixAutomatonCore,
  buildCore,
  loadSamd,
  rootCursor,
} from "./automaton.js";
import { Draft, draftLinear, draftTree } from "./drafting.js";

export {
  MatchCursor,
  NO_LINK,
  SamError,
  SamNode,
  SerializationError,
  SuffixAutomatonCore,
  buildCore,
  loadSamd,
  rootCursor,
} from "./automaton.js";
export {
  AUXILIARY,
  DYNAMIC_SAM,
  Draft,
  STATIC_SAM,
  draftLinear,
  draftTree,
} from "./drafting.js";
export { DEFAULT_TREE_SHAPE, RecycleTable } from "./recycling.js";
export {
  DecodeConfig,
  DecodeMetrics,
  DRAFT_LEN_CODE,
  DRAFT_LEN_DEFAULT,
  FALLBACK,
  Oracle,
  Session,
  VerifyResult,
  ngramOracle,
  plainDecode,
  replayOracle,
  selectDraft,
  verifyLinear,
  verifyTree,
} from "./decoding.js";

/** Frozen corpus automaton with an internal match cursor. */
export class StaticSam {
  cursor: MatchCursor = rootCursor();

  private constructor(readonly core: SuffixAutomatonCore) {}

  static load(path: string): StaticSam {
    return new StaticSam(loadSamd(readFileSync(path)));
  }

  static fromBytes(data: Uint8Array): StaticSam {
    return new StaticSam(loadSamd(data));
  }

  /** Build from already-joined corpus tokens and freeze with top-k annotations. */
  static fromTokens(ids: readonly number[], sep: number | null, k = 8): StaticSam {
    const core = buildCore(ids, sep);
    core.initTopk(k);
    return new StaticSam(core);
  }

  reset(): void {
    this.cursor = rootCursor();
  }

  /** Advance the match cursor by one token; returns the new match length. */
  transfer(id: number): number {
    this.cursor = this.core.transfer(this.cursor, id);
    return this.cursor.matchLen;
  }

  get matchLen(): number {
    return this.cursor.matchLen;
  }

  get minEndpos(): number {
    return this.core.nodes[this.cursor.state].minEndpos;
  }

  draftTree(anchor: number, maxSize: number): { ids: number[]; parents: number[] } | null {
    const draft: Draft | null = draftTree(this.core, this.cursor, anchor, maxSize);
    return draft === null ? null : { ids: draft.tokens, parents: draft.parents };
  }
}

/** Growing automaton over live text, with the lagged self-match cursor. */
export class DynamicSam {
  readonly core = new SuffixAutomatonCore();
  cursor: MatchCursor = rootCursor();

  /** Append one token to the indexed text (call transfer first). */
  expand(id: number): void {
    this.core.expand(id);
    this.cursor = this.core.recanonicalize(this.cursor);
  }

  /** Advance the match cursor by one token; returns the new match length. */
  transfer(id: number): number {
    this.cursor = this.core.transfer(this.cursor, id);
    return this.cursor.matchLen;
  }

  /** Transfer then expand: the standard per-token update order. */
  push(id: number): number {
    const len = this.transfer(id);
    this.expand(id);
    return len;
  }

  get matchLen(): number {
    return this.cursor.matchLen;
  }

  get minEndpos(): number {
    return this.core.nodes[this.cursor.state].minEndpos;
  }

  draftLinear(n: number): number[] | null {
    const draft = draftLinear(this.core, this.cursor, n);
    return draft === null ? null : draft.tokens;
  }
}
