import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseScene, SceneFormatError } from "../src/scene";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

const stressText = readFileSync(join(FIXTURES, "stress_scene.json"), "utf-8");
const fixtureText = readFileSync(join(FIXTURES, "fixture_scene.json"), "utf-8");

describe("parseScene", () => {
  it("loads the 1k-node stress scene without error", () => {
    const doc = parseScene(stressText);
    expect(doc.semantic_layer.length).toBe(1000);
    expect(doc.entity_layer.nodes.length).toBe(12);
    expect(doc.links.length).toBeGreaterThan(1000);
    expect(doc.version).toBe("semtopo/1");
  });

  it("loads the small fixture scene", () => {
    const doc = parseScene(fixtureText);
    expect(doc.semantic_layer.length).toBe(30);
    expect(doc.entity_layer.edges.length).toBe(13);
  });

  it("rejects corrupt files without partial results", () => {
    expect(() => parseScene("{ not json")).toThrow(SceneFormatError);
    expect(() => parseScene(stressText.slice(0, 5000))).toThrow(/JSON/);
  });

  it("rejects unknown versions", () => {
    const raw = JSON.parse(stressText);
    raw.version = "semtopo/9";
    expect(() => parseScene(JSON.stringify(raw))).toThrow(/semtopo\/9/);
  });

  it("reports schema violations with a path", () => {
    const raw = JSON.parse(fixtureText);
    raw.semantic_layer[3].cluster = "zero";
    expect(() => parseScene(JSON.stringify(raw))).toThrow(
      /semantic_layer\[3\]\.cluster/,
    );
  });

  it("rejects links to missing semantic nodes", () => {
    const raw = JSON.parse(fixtureText);
    raw.links[0].semantic_node = 777;
    raw.links[0].timestamp = 777;
    expect(() => parseScene(JSON.stringify(raw))).toThrow(/777/);
  });

  it("rejects edges naming unknown entities", () => {
    const raw = JSON.parse(fixtureText);
    raw.entity_layer.edges[0].entity_a = "nobody";
    expect(() => parseScene(JSON.stringify(raw))).toThrow(/nobody/);
  });
});
