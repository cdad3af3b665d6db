/** three.js projection of the scene document + ViewState.
 *
 * Semantic nodes render as one Points batch (single draw call, vertex
 * colors straight from the document palette); entity nodes as spheres
 * scaled by saliency; edges as cylinders with thickness proportional to
 * weight. Nothing in here mutates the document.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import { scoreToColor } from "./palette";
import { entityHighlight, frameCluster, type ViewState } from "./state";
import type { SceneDocument } from "./types";

const POINT_SIZE = 0.22;
const SELECTED_SCALE = 2.2;
const ENTITY_PLANE_Z = 0.0; // depth plane for dim=2 entity layouts
const ENTITY_BASE_RADIUS = 0.25;
const EDGE_RADIUS_SCALE = 0.09;
const DIM_COLOR = new THREE.Color(0x2a2a35);

export interface PickResult {
  kind: "semantic" | "entity";
  sentenceIndex?: number;
  entity?: string;
}

export class SceneRenderer {
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene = new THREE.Scene();
  private readonly camera: THREE.PerspectiveCamera;
  private readonly controls: OrbitControls;
  private readonly raycaster = new THREE.Raycaster();

  private doc: SceneDocument | null = null;
  private points: THREE.Points | null = null;
  private baseColors: Float32Array | null = null;
  private sizes: Float32Array | null = null;
  private entityMeshes = new Map<string, THREE.Mesh>();
  private edgeMeshes: { mesh: THREE.Mesh; a: string; b: string }[] = [];
  private selectionHalo: THREE.Mesh | null = null;

  constructor(private readonly canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.renderer.setPixelRatio(window.devicePixelRatio);
    this.camera = new THREE.PerspectiveCamera(55, 1, 0.01, 2000);
    this.camera.position.set(0, 0, 40);
    this.controls = new OrbitControls(this.camera, canvas);
    this.controls.enableDamping = true;
    this.controls.minDistance = 0.5;
    this.controls.maxDistance = 400;
    this.scene.background = new THREE.Color(0x0b0b10);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const key = new THREE.DirectionalLight(0xffffff, 0.8);
    key.position.set(1, 1, 2);
    this.scene.add(key);
    this.resize();
  }

  resize(): void {
    const width = this.canvas.clientWidth || this.canvas.width;
    const height = this.canvas.clientHeight || this.canvas.height;
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / Math.max(1, height);
    this.camera.updateProjectionMatrix();
  }

  /** Replace the rendered document wholesale. */
  load(doc: SceneDocument): void {
    this.clear();
    this.doc = doc;

    const n = doc.semantic_layer.length;
    const positions = new Float32Array(n * 3);
    const colors = new Float32Array(n * 3);
    doc.semantic_layer.forEach((node, i) => {
      positions.set(node.position, i * 3);
      const rgb = scoreToColor(doc.palette, node.sentiment_score);
      colors[i * 3] = rgb.r / 255;
      colors[i * 3 + 1] = rgb.g / 255;
      colors[i * 3 + 2] = rgb.b / 255;
    });
    this.baseColors = colors.slice();
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
    geometry.setAttribute("color", new THREE.BufferAttribute(colors, 3));
    const material = new THREE.PointsMaterial({
      size: POINT_SIZE,
      vertexColors: true,
      sizeAttenuation: true,
    });
    this.points = new THREE.Points(geometry, material);
    this.scene.add(this.points);

    const maxSaliency = Math.max(
      1e-9,
      ...doc.entity_layer.nodes.map((e) => e.saliency),
    );
    for (const entity of doc.entity_layer.nodes) {
      const radius =
        ENTITY_BASE_RADIUS * (0.6 + 1.4 * (entity.saliency / maxSaliency));
      const mesh = new THREE.Mesh(
        new THREE.SphereGeometry(radius, 20, 14),
        new THREE.MeshStandardMaterial({ color: 0xd9c27a }),
      );
      mesh.position.set(...this.entityPosition(entity.position));
      mesh.userData.entity = entity.entity;
      this.entityMeshes.set(entity.entity, mesh);
      this.scene.add(mesh);
    }

    for (const edge of doc.entity_layer.edges) {
      const a = this.entityMeshes.get(edge.entity_a)!;
      const b = this.entityMeshes.get(edge.entity_b)!;
      const mesh = this.makeEdgeCylinder(
        a.position,
        b.position,
        EDGE_RADIUS_SCALE * Math.max(0.08, edge.weight),
      );
      this.edgeMeshes.push({ mesh, a: edge.entity_a, b: edge.entity_b });
      this.scene.add(mesh);
    }

    this.frameEverything();
  }

  private entityPosition(position: number[]): [number, number, number] {
    return position.length >= 3
      ? [position[0], position[1], position[2]]
      : [position[0], position[1], ENTITY_PLANE_Z];
  }

  private makeEdgeCylinder(
    from: THREE.Vector3,
    to: THREE.Vector3,
    radius: number,
  ): THREE.Mesh {
    const direction = new THREE.Vector3().subVectors(to, from);
    const mesh = new THREE.Mesh(
      new THREE.CylinderGeometry(radius, radius, direction.length(), 8, 1),
      new THREE.MeshStandardMaterial({
        color: 0x8a8fa3,
        transparent: true,
        opacity: 0.8,
      }),
    );
    mesh.position.copy(from).addScaledVector(direction, 0.5);
    mesh.quaternion.setFromUnitVectors(
      new THREE.Vector3(0, 1, 0),
      direction.clone().normalize(),
    );
    return mesh;
  }

  private clear(): void {
    for (const child of [...this.scene.children]) {
      if ((child as THREE.Light).isLight) continue;
      this.scene.remove(child);
    }
    this.points = null;
    this.entityMeshes.clear();
    this.edgeMeshes = [];
    this.selectionHalo = null;
  }

  /** Re-style the static geometry to match the view state. */
  update(state: ViewState): void {
    const doc = this.doc;
    if (!doc || !this.points || !this.baseColors) return;
    this.points.visible = state.showSemanticLayer;
    for (const mesh of this.entityMeshes.values()) {
      mesh.visible = state.showEntityLayer;
    }

    const colorAttr = this.points.geometry.getAttribute(
      "color",
    ) as THREE.BufferAttribute;
    (colorAttr.array as Float32Array).set(this.baseColors);

    let highlightNodes: Set<number> | null = null;
    let highlightEdges: Set<string> | null = null;
    if (state.selectedEntity) {
      const highlight = entityHighlight(doc, state.selectedEntity);
      highlightNodes = new Set(highlight.nodes);
      highlightEdges = new Set(
        highlight.edges.map((e) => `${e.entity_a}|${e.entity_b}`),
      );
    } else if (state.selectedSentence !== null) {
      const cluster = doc.semantic_layer.find(
        (n) => n.sentence_index === state.selectedSentence,
      )?.cluster;
      highlightNodes = new Set(
        doc.semantic_layer
          .filter((n) => n.cluster === cluster)
          .map((n) => n.sentence_index),
      );
    }

    if (highlightNodes) {
      doc.semantic_layer.forEach((node, i) => {
        if (!highlightNodes!.has(node.sentence_index)) {
          colorAttr.setXYZ(i, DIM_COLOR.r, DIM_COLOR.g, DIM_COLOR.b);
        }
      });
    }
    colorAttr.needsUpdate = true;

    for (const { mesh, a, b } of this.edgeMeshes) {
      const material = mesh.material as THREE.MeshStandardMaterial;
      const emphasized = highlightEdges?.has(`${a}|${b}`) ?? false;
      material.color.set(emphasized ? 0xffd866 : 0x8a8fa3);
      material.opacity = highlightEdges ? (emphasized ? 1.0 : 0.15) : 0.8;
    }
    for (const [name, mesh] of this.entityMeshes) {
      const material = mesh.material as THREE.MeshStandardMaterial;
      material.color.set(name === state.selectedEntity ? 0xffd866 : 0xd9c27a);
    }

    this.updateHalo(state);
  }

  private updateHalo(state: ViewState): void {
    if (this.selectionHalo) {
      this.scene.remove(this.selectionHalo);
      this.selectionHalo = null;
    }
    if (state.selectedSentence === null || !this.doc) return;
    const node = this.doc.semantic_layer.find(
      (n) => n.sentence_index === state.selectedSentence,
    );
    if (!node) return;
    const halo = new THREE.Mesh(
      new THREE.SphereGeometry(POINT_SIZE * SELECTED_SCALE, 16, 12),
      new THREE.MeshBasicMaterial({
        color: 0xffffff,
        transparent: true,
        opacity: 0.35,
      }),
    );
    halo.position.set(...node.position);
    this.selectionHalo = halo;
    this.scene.add(halo);
  }

  /** Raycast pick: entity spheres first (bigger targets), then points. */
  pick(ndcX: number, ndcY: number): PickResult | null {
    if (!this.doc) return null;
    this.raycaster.setFromCamera(new THREE.Vector2(ndcX, ndcY), this.camera);
    this.raycaster.params.Points = { threshold: POINT_SIZE * 1.5 };
    const entityHit = this.raycaster.intersectObjects(
      [...this.entityMeshes.values()],
      false,
    )[0];
    if (entityHit) {
      return { kind: "entity", entity: entityHit.object.userData.entity };
    }
    if (this.points && this.points.visible) {
      const pointHit = this.raycaster.intersectObject(this.points, false)[0];
      if (pointHit && pointHit.index !== undefined) {
        return {
          kind: "semantic",
          sentenceIndex: this.doc.semantic_layer[pointHit.index].sentence_index,
        };
      }
    }
    return null;
  }

  /** Frame the cluster of the given sentence (double-click affordance). */
  frameClusterOf(sentenceIndex: number): void {
    if (!this.doc) return;
    const node = this.doc.semantic_layer.find(
      (n) => n.sentence_index === sentenceIndex,
    );
    if (!node) return;
    const frame = frameCluster(this.doc, node.cluster);
    const target = new THREE.Vector3(...frame.centroid);
    this.controls.target.copy(target);
    const distance = Math.max(2.5, frame.radius * 2.6);
    const direction = this.camera.position
      .clone()
      .sub(target)
      .normalize()
      .multiplyScalar(distance);
    this.camera.position.copy(target).add(direction);
  }

  frameEverything(): void {
    if (!this.doc || this.doc.semantic_layer.length === 0) return;
    const box = new THREE.Box3();
    for (const node of this.doc.semantic_layer) {
      box.expandByPoint(new THREE.Vector3(...node.position));
    }
    const center = box.getCenter(new THREE.Vector3());
    const size = box.getSize(new THREE.Vector3()).length();
    this.controls.target.copy(center);
    this.camera.position
      .copy(center)
      .add(new THREE.Vector3(0.4, 0.3, 1).normalize().multiplyScalar(size * 1.2));
  }

  start(): void {
    const loop = () => {
      requestAnimationFrame(loop);
      this.controls.update();
      this.renderer.render(this.scene, this.camera);
    };
    loop();
  }
}
