/** Data model for "semtopo/1" scene documents. */

export interface Palette {
  name: string;
  low_color: [number, number, number];
  high_color: [number, number, number];
  score_range: [number, number];
}

export interface SemanticNode {
  sentence_index: number;
  position: [number, number, number];
  cluster: number;
  sentiment_label: 0 | 1;
  sentiment_score: number;
  text: string;
}

export interface EntityNode {
  entity: string;
  saliency: number;
  mention_count: number;
  position: number[];
}

export interface EntityEdge {
  entity_a: string;
  entity_b: string;
  cooc_count: number;
  dep_proxy: number;
  weight: number;
  event_timestamps: number[];
}

export interface EntityLayer {
  dim: number;
  nodes: EntityNode[];
  edges: EntityEdge[];
}

export interface CrossLink {
  entity_a: string;
  entity_b: string;
  timestamp: number;
  semantic_node: number;
}

export interface SceneDocument {
  version: string;
  provenance: Record<string, unknown>;
  palette: Palette;
  semantic_layer: SemanticNode[];
  entity_layer: EntityLayer;
  links: CrossLink[];
  links_skipped: number;
}

export interface RGB {
  r: number;
  g: number;
  b: number;
}
