/**
 * Fixture-driven parity: every case was produced by the reference engine
 * (tools/gen_parity_fixtures.py); results here must be bit-identical.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  DecodeConfig,
  DynamicSam,
  Oracle,
  Session,
  StaticSam,
  ngramOracle,
  replayOracle,
} from "../src/index.js";

const here = dirname(fileURLToPath(import.meta.url));

interface DecodeCase {
  prompt: number[];
  oracle:
    | { type: "replay"; target: number[] }
    | { type: "ngram"; order: number; docs: number[][] };
  config: {
    draft_len: number | null;
    l_bias: number | null;
    l_threshold: number;
    max_new_tokens: number;
    use_dynamic: boolean;
    use_static: boolean;
    use_aux: boolean;
  };
  use_static_corpus: boolean;
  output: number[];
  metrics: Record<string, unknown>;
}

interface ParityCase {
  seed: number;
  vocab: number;
  sep: number;
  k: number;
  corpus_tokens: number[];
  static: {
    stream: number[];
    transfer: Array<[number, number]>;
    tree: {
      query: number[];
      max_size: number;
      tokens: number[] | null;
      parents: number[] | null;
    } | null;
  };
  dynamic: {
    reference: number[];
    per_token: Array<[number, number]>;
    draft_n: number;
    draft: number[] | null;
  };
  decode: DecodeCase;
}

const fixture = JSON.parse(
  readFileSync(join(here, "fixtures", "parity.json"), "utf-8"),
) as { cases: ParityCase[] };

function makeOracle(spec: DecodeCase["oracle"], promptLen: number): Oracle {
  if (spec.type === "replay") return replayOracle(spec.target, promptLen);
  return ngramOracle(spec.order, spec.docs);
}

function toConfig(c: DecodeCase["config"]): DecodeConfig {
  return {
    draftLen: c.draft_len,
    lBias: c.l_bias,
    lThreshold: c.l_threshold,
    maxNewTokens: c.max_new_tokens,
    useDynamic: c.use_dynamic,
    useStatic: c.use_static,
    useAux: c.use_aux,
  };
}

describe("parity with the reference engine (100 shared seeds)", () => {
  it("has the full fixture set", () => {
    expect(fixture.cases.length).toBe(100);
  });

  for (const c of fixture.cases) {
    describe(`seed ${c.seed}`, () => {
      it("matches transfer streams over the static automaton", () => {
        const sam = StaticSam.fromTokens(c.corpus_tokens, c.sep, c.k);
        for (let i = 0; i < c.static.stream.length; i++) {
          const len = sam.transfer(c.static.stream[i]);
          expect([len, sam.minEndpos]).toEqual(c.static.transfer[i]);
        }
      });

      it("matches tree drafts", () => {
        if (c.static.tree === null) return;
        const sam = StaticSam.fromTokens(c.corpus_tokens, c.sep, c.k);
        for (const t of c.static.tree.query) sam.transfer(t);
        const anchor = c.static.tree.query[c.static.tree.query.length - 1];
        const draft = sam.draftTree(anchor, c.static.tree.max_size);
        if (c.static.tree.tokens === null) {
          expect(draft).toBeNull();
        } else {
          expect(draft).not.toBeNull();
          expect(draft!.ids).toEqual(c.static.tree.tokens);
          expect(draft!.parents).toEqual(c.static.tree.parents);
        }
      });

      it("matches dynamic lagged self-matching and linear drafts", () => {
        const sam = new DynamicSam();
        for (let i = 0; i < c.dynamic.reference.length; i++) {
          sam.push(c.dynamic.reference[i]);
          expect([sam.matchLen, sam.minEndpos]).toEqual(c.dynamic.per_token[i]);
        }
        const draft = sam.matchLen >= 1 ? sam.draftLinear(c.dynamic.draft_n) : null;
        expect(draft).toEqual(c.dynamic.draft);
      });

      it("matches decode output and metrics", () => {
        const d = c.decode;
        const staticSam = d.use_static_corpus
          ? StaticSam.fromTokens(c.corpus_tokens, c.sep, c.k)
          : null;
        const session = new Session(toConfig(d.config), staticSam ? staticSam.core : null);
        const oracle = makeOracle(d.oracle, d.prompt.length);
        const result = session.decode(d.prompt, oracle);
        expect(result.ids).toEqual(d.output);
        expect(result.metrics).toEqual(d.metrics);
      });
    });
  }
});
