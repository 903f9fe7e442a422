/**
 * TF-IDF featurization mirroring the native pipeline bit-for-bit:
 * lowercase, split on non-alphanumeric runs, numeric tokens to <num>,
 * unigrams + adjacent bigrams, tf*idf, L2 normalization.
 */

export const NUM_TOKEN = "<num>";

export interface Vocabulary {
  termIndex: Map<string, number>;
  idf: Float64Array;
  size: number;
}

export interface FeatureVector {
  indices: number[];
  weights: number[];
  dimension: number;
}

export function tokenizeQuery(text: string): string[] {
  return text
    .toLowerCase()
    .split(/[^0-9a-z]+/)
    .filter((token) => token.length > 0)
    .map((token) => (/^[0-9]+$/.test(token) ? NUM_TOKEN : token));
}

export function queryTerms(text: string): string[] {
  const tokens = tokenizeQuery(text);
  const terms = [...tokens];
  for (let i = 0; i + 1 < tokens.length; i += 1) {
    terms.push(`${tokens[i]} ${tokens[i + 1]}`);
  }
  return terms;
}

export function vocabularyFromModel(payload: { terms: string[]; idf: number[] }): Vocabulary {
  const termIndex = new Map<string, number>();
  payload.terms.forEach((term, index) => termIndex.set(term, index));
  return { termIndex, idf: Float64Array.from(payload.idf), size: payload.terms.length };
}

export function featurize(vocab: Vocabulary, query: string): FeatureVector {
  const counts = new Map<number, number>();
  for (const term of queryTerms(query)) {
    const index = vocab.termIndex.get(term);
    if (index !== undefined) {
      counts.set(index, (counts.get(index) ?? 0) + 1);
    }
  }
  const indices = [...counts.keys()].sort((a, b) => a - b);
  const weights = indices.map((index) => counts.get(index)! * vocab.idf[index]);
  let sumSquares = 0;
  for (const w of weights) {
    sumSquares += w * w;
  }
  const norm = Math.sqrt(sumSquares);
  if (norm > 0) {
    for (let i = 0; i < weights.length; i += 1) {
      weights[i] /= norm;
    }
  }
  return { indices, weights, dimension: vocab.size };
}
