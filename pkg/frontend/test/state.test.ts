import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { scoreToColor } from "../src/palette";
import { parseScene } from "../src/scene";
import {
  describeNode,
  entityHighlight,
  frameCluster,
  initialState,
  selectEntity,
  selectSentence,
  stepSentence,
} from "../src/state";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const fixtureDoc = parseScene(
  readFileSync(join(FIXTURES, "fixture_scene.json"), "utf-8"),
);
const stressDoc = parseScene(
  readFileSync(join(FIXTURES, "stress_scene.json"), "utf-8"),
);

describe("entityHighlight", () => {
  it("equals the document-derived oracle for every entity", () => {
    for (const doc of [fixtureDoc, stressDoc]) {
      for (const { entity } of doc.entity_layer.nodes) {
        const highlight = entityHighlight(doc, entity);
        // oracle: links whose edge touches the entity, recomputed directly
        const expectedNodes = new Set<number>();
        const expectedTimestamps: number[] = [];
        for (const link of doc.links) {
          if (link.entity_a === entity || link.entity_b === entity) {
            expectedNodes.add(link.semantic_node);
            expectedTimestamps.push(link.timestamp);
          }
        }
        expect(highlight.nodes).toEqual([...expectedNodes].sort((a, b) => a - b));
        expect(highlight.timestamps).toEqual(
          expectedTimestamps.sort((a, b) => a - b),
        );
        const expectedEdges = doc.entity_layer.edges.filter(
          (e) => e.entity_a === entity || e.entity_b === entity,
        );
        expect(highlight.edges).toEqual(expectedEdges);
      }
    }
  });

  it("gives an isolated entity zero highlights", () => {
    const doc = structuredClone(fixtureDoc);
    doc.entity_layer.nodes.push({
      entity: "hermit",
      saliency: 0.1,
      mention_count: 1,
      position: [0, 0, 0],
    });
    const highlight = entityHighlight(doc, "hermit");
    expect(highlight.nodes).toEqual([]);
    expect(highlight.edges).toEqual([]);
    expect(highlight.timestamps).toEqual([]);
  });

  it("counts one highlighted node per distinct linked sentence", () => {
    const doc = fixtureDoc;
    const entity = doc.entity_layer.nodes[0].entity;
    const highlight = entityHighlight(doc, entity);
    const linkCount = doc.links.filter(
      (l) => l.entity_a === entity || l.entity_b === entity,
    ).length;
    expect(highlight.timestamps.length).toBe(linkCount);
    expect(new Set(highlight.nodes).size).toBe(highlight.nodes.length);
  });
});

describe("palette", () => {
  it("colors every node as the linear palette function of its score", () => {
    for (const doc of [fixtureDoc, stressDoc]) {
      const { low_color, high_color, score_range } = doc.palette;
      const [lo, hi] = score_range;
      for (const node of doc.semantic_layer) {
        const got = scoreToColor(doc.palette, node.sentiment_score);
        const t = (node.sentiment_score - lo) / (hi - lo);
        expect(Math.abs(got.r - (low_color[0] + (high_color[0] - low_color[0]) * t)))
          .toBeLessThanOrEqual(1);
        expect(Math.abs(got.g - (low_color[1] + (high_color[1] - low_color[1]) * t)))
          .toBeLessThanOrEqual(1);
        expect(Math.abs(got.b - (low_color[2] + (high_color[2] - low_color[2]) * t)))
          .toBeLessThanOrEqual(1);
      }
    }
  });

  it("maps the range endpoints to the palette endpoints exactly", () => {
    const palette = fixtureDoc.palette;
    expect(scoreToColor(palette, -1)).toEqual({
      r: palette.low_color[0],
      g: palette.low_color[1],
      b: palette.low_color[2],
    });
    expect(scoreToColor(palette, 1)).toEqual({
      r: palette.high_color[0],
      g: palette.high_color[1],
      b: palette.high_color[2],
    });
  });
});

describe("selection", () => {
  it("panel text equals the scene's sentence text", () => {
    for (const node of fixtureDoc.semantic_layer) {
      const info = describeNode(fixtureDoc, node.sentence_index);
      expect(info.text).toBe(node.text);
      expect(info.cluster).toBe(node.cluster);
      expect(info.sentimentLabel).toBe(node.sentiment_label);
    }
  });

  it("cluster mates exclude the node itself", () => {
    const node = fixtureDoc.semantic_layer[5];
    const info = describeNode(fixtureDoc, node.sentence_index);
    expect(info.clusterMates).not.toContain(node.sentence_index);
    const expected = fixtureDoc.semantic_layer.filter(
      (n) =>
        n.cluster === node.cluster && n.sentence_index !== node.sentence_index,
    ).length;
    expect(info.clusterMates.length).toBe(expected);
  });

  it("clicking empty space deselects", () => {
    let state = initialState(fixtureDoc);
    state = selectSentence(state, 3);
    expect(state.selectedSentence).toBe(3);
    state = selectSentence(state, null);
    expect(state.selectedSentence).toBeNull();
  });

  it("keyboard next/prev walks sentence order and clamps", () => {
    let state = initialState(fixtureDoc);
    state = selectSentence(state, 3);
    state = stepSentence(fixtureDoc, state, 1);
    expect(state.selectedSentence).toBe(4);
    state = stepSentence(fixtureDoc, state, -1);
    state = stepSentence(fixtureDoc, state, -1);
    expect(state.selectedSentence).toBe(2);
    state = selectSentence(state, 0);
    state = stepSentence(fixtureDoc, state, -1);
    expect(state.selectedSentence).toBe(0);
    state = selectSentence(state, 29);
    state = stepSentence(fixtureDoc, state, 1);
    expect(state.selectedSentence).toBe(29);
  });

  it("selecting an entity clears the sentence selection and vice versa", () => {
    let state = initialState(fixtureDoc);
    state = selectSentence(state, 3);
    state = selectEntity(state, "mr gray");
    expect(state.selectedSentence).toBeNull();
    expect(state.selectedEntity).toBe("mr gray");
    state = selectSentence(state, 7);
    expect(state.selectedEntity).toBeNull();
  });

  it("empty-links scenes start with cross-layer mode disabled", () => {
    const doc = structuredClone(fixtureDoc);
    doc.links = [];
    doc.links_skipped = 0;
    doc.entity_layer = { dim: 3, nodes: [], edges: [] };
    const state = initialState(doc);
    expect(state.showLinks).toBe(false);
    expect(state.showEntityLayer).toBe(false);
  });
});

describe("frameCluster", () => {
  it("contains every cluster member within the bounding radius", () => {
    const clusters = new Set(stressDoc.semantic_layer.map((n) => n.cluster));
    for (const cluster of clusters) {
      const frame = frameCluster(stressDoc, cluster);
      const members = stressDoc.semantic_layer.filter(
        (n) => n.cluster === cluster,
      );
      expect(frame.members.length).toBe(members.length);
      for (const node of members) {
        const dx = node.position[0] - frame.centroid[0];
        const dy = node.position[1] - frame.centroid[1];
        const dz = node.position[2] - frame.centroid[2];
        expect(Math.sqrt(dx * dx + dy * dy + dz * dz)).toBeLessThanOrEqual(
          frame.radius + 1e-9,
        );
      }
    }
  });
});

describe("read-only contract", () => {
  it("state operations never mutate the document", () => {
    const before = JSON.stringify(fixtureDoc);
    let state = initialState(fixtureDoc);
    state = selectSentence(state, 3);
    describeNode(fixtureDoc, 3);
    entityHighlight(fixtureDoc, "mr gray");
    frameCluster(fixtureDoc, fixtureDoc.semantic_layer[0].cluster);
    stepSentence(fixtureDoc, state, 1);
    expect(JSON.stringify(fixtureDoc)).toBe(before);
  });
});
