/**
 * Classifier model files (the same versioned JSON the trainer writes) and
 * in-browser prediction for both kinds.
 */

import { FeatureVector, Vocabulary, featurize, vocabularyFromModel } from "./features.js";

export const MODEL_FORMAT_VERSION = 1;

export class ModelFileError extends Error {}
export class VersionMismatch extends ModelFileError {}
export class CorruptModel extends ModelFileError {}

export interface SvmModel {
  kind: "svm";
  classes: string[];
  vocabulary: Vocabulary;
  weights: number[][];
  biases: number[];
}

export interface TreeArrays {
  feature: number[];
  threshold: number[];
  left: number[];
  right: number[];
  label: number[];
}

export interface ForestModel {
  kind: "rf";
  classes: string[];
  vocabulary: Vocabulary;
  trees: TreeArrays[];
}

export type ClassifierModel = SvmModel | ForestModel;

export function parseModel(text: string): ClassifierModel {
  let payload: any;
  try {
    payload = JSON.parse(text);
  } catch (error) {
    throw new CorruptModel(`not a valid model document: ${String(error)}`);
  }
  if (typeof payload !== "object" || payload === null) {
    throw new CorruptModel("model document is not an object");
  }
  if (payload.format_version !== MODEL_FORMAT_VERSION) {
    throw new VersionMismatch(
      `expected format_version ${MODEL_FORMAT_VERSION}, got ${payload.format_version}`,
    );
  }
  try {
    const vocabulary = vocabularyFromModel(payload.vocabulary);
    if (payload.kind === "svm") {
      return {
        kind: "svm",
        classes: payload.classes,
        vocabulary,
        weights: payload.weights,
        biases: payload.biases,
      };
    }
    if (payload.kind === "rf") {
      return { kind: "rf", classes: payload.classes, vocabulary, trees: payload.trees };
    }
  } catch (error) {
    throw new CorruptModel(`model body is incomplete: ${String(error)}`);
  }
  throw new CorruptModel(`unknown model kind: ${payload.kind}`);
}

function argmaxFirst(values: number[]): number {
  let best = 0;
  for (let i = 1; i < values.length; i += 1) {
    if (values[i] > values[best]) {
      best = i;
    }
  }
  return best;
}

export function predictSvm(model: SvmModel, vector: FeatureVector): string {
  const scores = model.biases.map((bias, k) => {
    let score = 0;
    const row = model.weights[k];
    for (let i = 0; i < vector.indices.length; i += 1) {
      score += row[vector.indices[i]] * vector.weights[i];
    }
    return score + bias;
  });
  return model.classes[argmaxFirst(scores)];
}

function routeTree(tree: TreeArrays, dense: Float64Array): number {
  let node = 0;
  while (tree.feature[node] >= 0) {
    node = dense[tree.feature[node]] <= tree.threshold[node] ? tree.left[node] : tree.right[node];
  }
  return tree.label[node];
}

export function predictForest(model: ForestModel, vector: FeatureVector): string {
  const dense = new Float64Array(vector.dimension);
  vector.indices.forEach((index, i) => {
    dense[index] = vector.weights[i];
  });
  const votes = new Array(model.classes.length).fill(0);
  for (const tree of model.trees) {
    votes[routeTree(tree, dense)] += 1;
  }
  return model.classes[argmaxFirst(votes)];
}

export function classify(model: ClassifierModel, query: string): string {
  const vector = featurize(model.vocabulary, query);
  return model.kind === "svm" ? predictSvm(model, vector) : predictForest(model, vector);
}
