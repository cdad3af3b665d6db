/** Scene loading: strict parse of "semtopo/1" documents with path-addressed
 * errors. The viewer never renders a partially-parsed document. */

import type {
  CrossLink,
  EntityEdge,
  EntityLayer,
  EntityNode,
  Palette,
  SceneDocument,
  SemanticNode,
} from "./types";

export const SCENE_VERSION = "semtopo/1";

export class SceneFormatError extends Error {
  constructor(path: string, message: string) {
    super(path ? `${path}: ${message}` : message);
    this.name = "SceneFormatError";
  }
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function getNumber(obj: Record<string, unknown>, key: string, path: string): number {
  const value = obj[key];
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new SceneFormatError(`${path}${key}`, "expected a finite number");
  }
  return value;
}

function getInt(obj: Record<string, unknown>, key: string, path: string): number {
  const value = getNumber(obj, key, path);
  if (!Number.isInteger(value)) {
    throw new SceneFormatError(`${path}${key}`, "expected an integer");
  }
  return value;
}

function getString(obj: Record<string, unknown>, key: string, path: string): string {
  const value = obj[key];
  if (typeof value !== "string") {
    throw new SceneFormatError(`${path}${key}`, "expected a string");
  }
  return value;
}

function getArray(obj: Record<string, unknown>, key: string, path: string): unknown[] {
  const value = obj[key];
  if (!Array.isArray(value)) {
    throw new SceneFormatError(`${path}${key}`, "expected an array");
  }
  return value;
}

function getObject(
  obj: Record<string, unknown>,
  key: string,
  path: string,
): Record<string, unknown> {
  const value = obj[key];
  if (!isRecord(value)) {
    throw new SceneFormatError(`${path}${key}`, "expected an object");
  }
  return value;
}

function numberTriple(value: unknown, path: string): [number, number, number] {
  if (
    !Array.isArray(value) ||
    value.length !== 3 ||
    value.some((x) => typeof x !== "number" || !Number.isFinite(x))
  ) {
    throw new SceneFormatError(path, "expected 3 finite numbers");
  }
  return [value[0], value[1], value[2]] as [number, number, number];
}

function parsePalette(raw: Record<string, unknown>): Palette {
  return {
    name: getString(raw, "name", "palette."),
    low_color: numberTriple(raw["low_color"], "palette.low_color"),
    high_color: numberTriple(raw["high_color"], "palette.high_color"),
    score_range: (() => {
      const range = getArray(raw, "score_range", "palette.");
      if (range.length !== 2 || range.some((x) => typeof x !== "number")) {
        throw new SceneFormatError("palette.score_range", "expected 2 numbers");
      }
      return [range[0], range[1]] as [number, number];
    })(),
  };
}

function parseSemanticNode(raw: unknown, path: string): SemanticNode {
  if (!isRecord(raw)) throw new SceneFormatError(path, "expected an object");
  const label = getInt(raw, "sentiment_label", path);
  if (label !== 0 && label !== 1) {
    throw new SceneFormatError(`${path}sentiment_label`, "expected 0 or 1");
  }
  return {
    sentence_index: getInt(raw, "sentence_index", path),
    position: numberTriple(raw["position"], `${path}position`),
    cluster: getInt(raw, "cluster", path),
    sentiment_label: label,
    sentiment_score: getNumber(raw, "sentiment_score", path),
    text: getString(raw, "text", path),
  };
}

function parseEntityLayer(raw: Record<string, unknown>): EntityLayer {
  const dim = getInt(raw, "dim", "entity_layer.");
  const nodes: EntityNode[] = getArray(raw, "nodes", "entity_layer.").map(
    (item, i) => {
      const path = `entity_layer.nodes[${i}].`;
      if (!isRecord(item)) throw new SceneFormatError(path, "expected an object");
      const position = getArray(item, "position", path).map((x, j) => {
        if (typeof x !== "number" || !Number.isFinite(x)) {
          throw new SceneFormatError(`${path}position[${j}]`, "expected a number");
        }
        return x;
      });
      return {
        entity: getString(item, "entity", path),
        saliency: getNumber(item, "saliency", path),
        mention_count: getInt(item, "mention_count", path),
        position,
      };
    },
  );
  const edges: EntityEdge[] = getArray(raw, "edges", "entity_layer.").map(
    (item, i) => {
      const path = `entity_layer.edges[${i}].`;
      if (!isRecord(item)) throw new SceneFormatError(path, "expected an object");
      return {
        entity_a: getString(item, "entity_a", path),
        entity_b: getString(item, "entity_b", path),
        cooc_count: getInt(item, "cooc_count", path),
        dep_proxy: getNumber(item, "dep_proxy", path),
        weight: getNumber(item, "weight", path),
        event_timestamps: getArray(item, "event_timestamps", path).map((x, j) => {
          if (typeof x !== "number" || !Number.isInteger(x)) {
            throw new SceneFormatError(
              `${path}event_timestamps[${j}]`,
              "expected an integer",
            );
          }
          return x;
        }),
      };
    },
  );
  return { dim, nodes, edges };
}

/** Parse and cross-validate scene JSON text; throws SceneFormatError. */
export function parseScene(text: string): SceneDocument {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (exc) {
    throw new SceneFormatError("", `not valid JSON: ${(exc as Error).message}`);
  }
  if (!isRecord(raw)) throw new SceneFormatError("", "expected a JSON object");

  const version = getString(raw, "version", "");
  if (version !== SCENE_VERSION) {
    throw new SceneFormatError(
      "version",
      `unsupported scene version '${version}'; this viewer reads '${SCENE_VERSION}'`,
    );
  }

  const doc: SceneDocument = {
    version,
    provenance: getObject(raw, "provenance", ""),
    palette: parsePalette(getObject(raw, "palette", "")),
    semantic_layer: getArray(raw, "semantic_layer", "").map((item, i) =>
      parseSemanticNode(item, `semantic_layer[${i}].`),
    ),
    entity_layer: parseEntityLayer(getObject(raw, "entity_layer", "")),
    links: getArray(raw, "links", "").map((item, i) => {
      const path = `links[${i}].`;
      if (!isRecord(item)) throw new SceneFormatError(path, "expected an object");
      return {
        entity_a: getString(item, "entity_a", path),
        entity_b: getString(item, "entity_b", path),
        timestamp: getInt(item, "timestamp", path),
        semantic_node: getInt(item, "semantic_node", path),
      } satisfies CrossLink;
    }),
    links_skipped: getInt(raw, "links_skipped", ""),
  };
  validateScene(doc);
  return doc;
}

/** Referential integrity: every reference must resolve inside the document. */
export function validateScene(doc: SceneDocument): void {
  const sentenceIndices = new Set<number>();
  for (const node of doc.semantic_layer) {
    if (sentenceIndices.has(node.sentence_index)) {
      throw new SceneFormatError(
        "semantic_layer",
        `duplicate sentence index ${node.sentence_index}`,
      );
    }
    sentenceIndices.add(node.sentence_index);
  }
  const entities = new Set(doc.entity_layer.nodes.map((n) => n.entity));
  const edgeKeys = new Set<string>();
  for (const edge of doc.entity_layer.edges) {
    if (!entities.has(edge.entity_a) || !entities.has(edge.entity_b)) {
      throw new SceneFormatError(
        "entity_layer.edges",
        `edge (${edge.entity_a}, ${edge.entity_b}) references a missing entity`,
      );
    }
    edgeKeys.add(`${edge.entity_a}|${edge.entity_b}`);
  }
  for (const [i, link] of doc.links.entries()) {
    if (!edgeKeys.has(`${link.entity_a}|${link.entity_b}`)) {
      throw new SceneFormatError(
        `links[${i}]`,
        `references unknown edge (${link.entity_a}, ${link.entity_b})`,
      );
    }
    if (!sentenceIndices.has(link.semantic_node)) {
      throw new SceneFormatError(
        `links[${i}]`,
        `references missing semantic node ${link.semantic_node}`,
      );
    }
    if (link.semantic_node !== link.timestamp) {
      throw new SceneFormatError(
        `links[${i}]`,
        `semantic_node ${link.semantic_node} != timestamp ${link.timestamp}`,
      );
    }
  }
}
