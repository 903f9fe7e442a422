/**
 * In-browser greedy decoding of an exported interchange model: the same
 * tokenizer and network math as the reference runtime, in plain JS floats.
 */

import { NpyArray, NpzError, parseNpz } from "./npz.js";

const MARKER = "▁";
const PAD = "<pad>";
const BOS = "<s>";
const EOS = "</s>";
const UNK = "<unk>";

const TOKEN_RE = /[A-Za-z]+|[0-9]|[^A-Za-z0-9\s]/g;

export function scan(text: string): string[] {
  const tokens: string[] = [];
  for (const match of text.matchAll(TOKEN_RE)) {
    const start = match.index ?? 0;
    const spaced = start > 0 && /\s/.test(text[start - 1]);
    tokens.push((spaced ? MARKER : "") + match[0]);
  }
  return tokens;
}

export function join(tokens: string[]): string {
  let out = "";
  for (const token of tokens) {
    if (token === PAD || token === BOS || token === EOS || token === UNK) {
      continue;
    }
    out += token.startsWith(MARKER) ? " " + token.slice(MARKER.length) : token;
  }
  return out;
}

interface InterchangeConfig {
  format: string;
  version: number;
  d_model: number;
  hidden: number;
  max_len: number;
  vocab: string[];
}

function matvec(weights: Float32Array, rows: number, cols: number, x: Float64Array): Float64Array {
  const out = new Float64Array(rows);
  for (let r = 0; r < rows; r += 1) {
    let sum = 0;
    const base = r * cols;
    for (let c = 0; c < cols; c += 1) {
      sum += weights[base + c] * x[c];
    }
    out[r] = sum;
  }
  return out;
}

const sigmoid = (x: number): number => 1 / (1 + Math.exp(-x));

function gruCell(
  x: Float64Array,
  h: Float64Array,
  wIh: Float32Array,
  wHh: Float32Array,
  bIh: Float32Array,
  bHh: Float32Array,
): Float64Array {
  const size = h.length;
  const gi = matvec(wIh, 3 * size, x.length, x);
  const gh = matvec(wHh, 3 * size, size, h);
  const out = new Float64Array(size);
  for (let i = 0; i < size; i += 1) {
    const r = sigmoid(gi[i] + bIh[i] + gh[i] + bHh[i]);
    const z = sigmoid(gi[size + i] + bIh[size + i] + gh[size + i] + bHh[size + i]);
    const n = Math.tanh(gi[2 * size + i] + bIh[2 * size + i] + r * (gh[2 * size + i] + bHh[2 * size + i]));
    out[i] = (1 - z) * n + z * h[i];
  }
  return out;
}

export class SlmTranslator {
  private readonly tokenToId = new Map<string, number>();
  private readonly config: InterchangeConfig;

  private constructor(
    private readonly arrays: Map<string, NpyArray>,
    config: InterchangeConfig,
  ) {
    this.config = config;
    config.vocab.forEach((token, index) => this.tokenToId.set(token, index));
  }

  static fromBuffer(buffer: ArrayBuffer): SlmTranslator {
    const arrays = parseNpz(buffer);
    const configEntry = arrays.get("config");
    if (!configEntry || configEntry.text === null) {
      throw new NpzError("missing config entry");
    }
    const config = JSON.parse(configEntry.text) as InterchangeConfig;
    if (config.format !== "geoslm-interchange") {
      throw new NpzError("not an interchange bundle");
    }
    if (config.version !== 1) {
      throw new NpzError(`unsupported version ${config.version}`);
    }
    return new SlmTranslator(arrays, config);
  }

  private floats(name: string): Float32Array {
    const entry = this.arrays.get(name);
    if (!entry || entry.data === null) {
      throw new NpzError(`missing array ${name}`);
    }
    return entry.data;
  }

  private embed(id: number): Float64Array {
    const d = this.config.d_model;
    const table = this.floats("embedding");
    return Float64Array.from(table.subarray(id * d, (id + 1) * d));
  }

  translate(query: string): string {
    const cfg = this.config;
    const padId = this.tokenToId.get(PAD)!;
    const bosId = this.tokenToId.get(BOS)!;
    const eosId = this.tokenToId.get(EOS)!;
    const unkId = this.tokenToId.get(UNK)!;
    const srcIds = scan(query)
      .map((token) => this.tokenToId.get(token) ?? unkId)
      .slice(0, cfg.max_len);
    while (srcIds.length < cfg.max_len) {
      srcIds.push(padId);
    }

    const half = cfg.hidden / 2;
    const steps = srcIds.length;
    const encOut: Float64Array[] = Array.from({ length: steps }, () => new Float64Array(cfg.hidden));
    let h: Float64Array = new Float64Array(half);
    for (let t = 0; t < steps; t += 1) {
      h = gruCell(
        this.embed(srcIds[t]), h,
        this.floats("enc_w_ih_f"), this.floats("enc_w_hh_f"),
        this.floats("enc_b_ih_f"), this.floats("enc_b_hh_f"),
      );
      encOut[t].set(h, 0);
    }
    const hFwd = h;
    h = new Float64Array(half);
    for (let t = steps - 1; t >= 0; t -= 1) {
      h = gruCell(
        this.embed(srcIds[t]), h,
        this.floats("enc_w_ih_b"), this.floats("enc_w_hh_b"),
        this.floats("enc_b_ih_b"), this.floats("enc_b_hh_b"),
      );
      encOut[t].set(h, half);
    }
    const hBwd = h;

    const bridgeIn = new Float64Array(cfg.hidden);
    bridgeIn.set(hFwd, 0);
    bridgeIn.set(hBwd, half);
    const bridged = matvec(this.floats("bridge_w"), cfg.hidden, cfg.hidden, bridgeIn);
    const bridgeBias = this.floats("bridge_b");
    let hidden: Float64Array = new Float64Array(cfg.hidden);
    for (let i = 0; i < cfg.hidden; i += 1) {
      hidden[i] = Math.tanh(bridged[i] + bridgeBias[i]);
    }

    // score_s = (enc_s @ attn_w) . dec_h, with attn_w applied row-wise once.
    const attnW = this.floats("attn_w");
    const attended = encOut.map((enc) => {
      const projected = new Float64Array(cfg.hidden);
      for (let r = 0; r < cfg.hidden; r += 1) {
        let sum = 0;
        for (let c = 0; c < cfg.hidden; c += 1) {
          sum += enc[c] * attnW[c * cfg.hidden + r];
        }
        projected[r] = sum;
      }
      return projected;
    });

    const vocabSize = cfg.vocab.length;
    const outW = this.floats("out_w");
    const outB = this.floats("out_b");
    const gateW = this.floats("gate_w");
    const gateB = this.floats("gate_b");
    const shiftGain = this.floats("shift_gain")[0];

    let context = new Float64Array(cfg.hidden);
    let att = new Float64Array(steps);
    let token = bosId;
    const outIds: number[] = [];
    for (let step = 0; step < cfg.max_len; step += 1) {
      const emb = this.embed(token);
      const gruIn = new Float64Array(cfg.d_model + cfg.hidden);
      gruIn.set(emb, 0);
      gruIn.set(context, cfg.d_model);
      hidden = gruCell(
        gruIn, hidden,
        this.floats("dec_w_ih"), this.floats("dec_w_hh"),
        this.floats("dec_b_ih"), this.floats("dec_b_hh"),
      );
      const scores = new Float64Array(steps);
      let maxScore = -Infinity;
      for (let s = 0; s < steps; s += 1) {
        if (srcIds[s] === padId) {
          scores[s] = -Infinity;
          continue;
        }
        let sum = 0;
        const proj = attended[s];
        for (let i = 0; i < cfg.hidden; i += 1) {
          sum += proj[i] * hidden[i];
        }
        if (s > 0) {
          sum += shiftGain * att[s - 1];
        }
        scores[s] = sum;
        if (sum > maxScore) {
          maxScore = sum;
        }
      }
      const nextAtt = new Float64Array(steps);
      let attSum = 0;
      for (let s = 0; s < steps; s += 1) {
        const value = scores[s] === -Infinity ? 0 : Math.exp(scores[s] - maxScore);
        nextAtt[s] = value;
        attSum += value;
      }
      context = new Float64Array(cfg.hidden);
      for (let s = 0; s < steps; s += 1) {
        nextAtt[s] /= attSum;
        if (nextAtt[s] > 0) {
          const enc = encOut[s];
          for (let i = 0; i < cfg.hidden; i += 1) {
            context[i] += nextAtt[s] * enc[i];
          }
        }
      }
      att = nextAtt;

      const features = new Float64Array(2 * cfg.hidden);
      features.set(hidden, 0);
      features.set(context, cfg.hidden);
      const logits = matvec(outW, vocabSize, 2 * cfg.hidden, features);
      let maxLogit = -Infinity;
      for (let v = 0; v < vocabSize; v += 1) {
        logits[v] += outB[v];
        if (logits[v] > maxLogit) {
          maxLogit = logits[v];
        }
      }
      let expSum = 0;
      for (let v = 0; v < vocabSize; v += 1) {
        logits[v] = Math.exp(logits[v] - maxLogit);
        expSum += logits[v];
      }
      let gateIn = 0;
      for (let i = 0; i < 2 * cfg.hidden; i += 1) {
        gateIn += gateW[i] * features[i];
      }
      for (let i = 0; i < cfg.d_model; i += 1) {
        gateIn += gateW[2 * cfg.hidden + i] * emb[i];
      }
      const gate = sigmoid(gateIn + gateB[0]);
      const probs = new Float64Array(vocabSize);
      for (let v = 0; v < vocabSize; v += 1) {
        probs[v] = (gate * logits[v]) / expSum;
      }
      for (let s = 0; s < steps; s += 1) {
        if (nextAtt[s] > 0) {
          probs[srcIds[s]] += (1 - gate) * nextAtt[s];
        }
      }
      let best = 0;
      for (let v = 1; v < vocabSize; v += 1) {
        if (probs[v] > probs[best]) {
          best = v;
        }
      }
      token = best;
      if (token === eosId) {
        break;
      }
      outIds.push(token);
    }
    return join(outIds.map((id) => cfg.vocab[id]));
  }
}
