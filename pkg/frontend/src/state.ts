/** Render-free view state and selection logic.
 *
 * Everything here is a pure function over the (immutable) scene document so
 * that selection, highlighting, and navigation are unit-testable without a
 * GPU. The render layer is a thin projection of ViewState.
 */

import type { CrossLink, EntityEdge, SceneDocument, SemanticNode } from "./types";

export interface ViewState {
  selectedSentence: number | null;
  selectedEntity: string | null;
  showSemanticLayer: boolean;
  showEntityLayer: boolean;
  showLinks: boolean;
}

export function initialState(doc: SceneDocument): ViewState {
  return {
    selectedSentence: null,
    selectedEntity: null,
    showSemanticLayer: true,
    showEntityLayer: doc.entity_layer.nodes.length > 0,
    showLinks: doc.links.length > 0,
  };
}

export interface NodePanel {
  sentenceIndex: number;
  text: string;
  cluster: number;
  sentimentLabel: 0 | 1;
  sentimentScore: number;
  clusterMates: number[];
}

const nodeIndex = new WeakMap<SceneDocument, Map<number, SemanticNode>>();

export function semanticNode(doc: SceneDocument, sentence: number): SemanticNode {
  let index = nodeIndex.get(doc);
  if (!index) {
    index = new Map(doc.semantic_layer.map((n) => [n.sentence_index, n]));
    nodeIndex.set(doc, index);
  }
  const node = index.get(sentence);
  if (!node) throw new Error(`no semantic node for sentence ${sentence}`);
  return node;
}

/** Detail panel contents for a selected sentence node. */
export function describeNode(doc: SceneDocument, sentence: number): NodePanel {
  const node = semanticNode(doc, sentence);
  return {
    sentenceIndex: node.sentence_index,
    text: node.text,
    cluster: node.cluster,
    sentimentLabel: node.sentiment_label,
    sentimentScore: node.sentiment_score,
    clusterMates: doc.semantic_layer
      .filter((n) => n.cluster === node.cluster && n.sentence_index !== sentence)
      .map((n) => n.sentence_index),
  };
}

export function selectSentence(state: ViewState, sentence: number | null): ViewState {
  return { ...state, selectedSentence: sentence, selectedEntity: null };
}

export function selectEntity(state: ViewState, entity: string | null): ViewState {
  return { ...state, selectedEntity: entity, selectedSentence: null };
}

/** Keyboard navigation walks sentence order, clamped at both ends. */
export function stepSentence(
  doc: SceneDocument,
  state: ViewState,
  delta: 1 | -1,
): ViewState {
  const order = doc.semantic_layer.map((n) => n.sentence_index);
  if (order.length === 0) return state;
  if (state.selectedSentence === null) {
    return selectSentence(state, delta === 1 ? order[0] : order[order.length - 1]);
  }
  const at = order.indexOf(state.selectedSentence);
  const next = Math.min(order.length - 1, Math.max(0, at + delta));
  return selectSentence(state, order[next]);
}

export interface EntityHighlight {
  entity: string;
  edges: EntityEdge[];
  /** Sentence indices of every cross-linked semantic node, ascending. */
  nodes: number[];
  /** Timeline marks: one timestamp per link event, ascending, with repeats. */
  timestamps: number[];
  links: CrossLink[];
}

/** Pure cross-layer highlight: the links of every edge incident to the
 * entity, resolved to their semantic nodes. */
export function entityHighlight(doc: SceneDocument, entity: string): EntityHighlight {
  const edges = doc.entity_layer.edges.filter(
    (e) => e.entity_a === entity || e.entity_b === entity,
  );
  const keys = new Set(edges.map((e) => `${e.entity_a}|${e.entity_b}`));
  const links = doc.links.filter((l) => keys.has(`${l.entity_a}|${l.entity_b}`));
  const nodes = [...new Set(links.map((l) => l.semantic_node))].sort((a, b) => a - b);
  const timestamps = links.map((l) => l.timestamp).sort((a, b) => a - b);
  return { entity, edges, nodes, timestamps, links };
}

export interface ClusterFrame {
  cluster: number;
  centroid: [number, number, number];
  /** Radius of the bounding sphere around the centroid. */
  radius: number;
  members: number[];
}

/** Camera target for "frame this cluster": centroid plus bounding radius. */
export function frameCluster(doc: SceneDocument, cluster: number): ClusterFrame {
  const members = doc.semantic_layer.filter((n) => n.cluster === cluster);
  if (members.length === 0) throw new Error(`no nodes in cluster ${cluster}`);
  const centroid: [number, number, number] = [0, 0, 0];
  for (const node of members) {
    centroid[0] += node.position[0];
    centroid[1] += node.position[1];
    centroid[2] += node.position[2];
  }
  centroid[0] /= members.length;
  centroid[1] /= members.length;
  centroid[2] /= members.length;
  let radius = 0;
  for (const node of members) {
    const dx = node.position[0] - centroid[0];
    const dy = node.position[1] - centroid[1];
    const dz = node.position[2] - centroid[2];
    radius = Math.max(radius, Math.sqrt(dx * dx + dy * dy + dz * dz));
  }
  return {
    cluster,
    centroid,
    radius,
    members: members.map((n) => n.sentence_index),
  };
}
