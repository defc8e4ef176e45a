/**
 * three.js scene wiring.
 *
 * Floating origin: the GL camera stays at (0,0,0) and every mesh is
 * re-positioned to (center - cameraWorld) each frame, computed in f64
 * before the f32 handoff, so planetary coordinates never touch single
 * precision. Tile geometry itself is already camera-independent (RTC
 * offsets from the tile center).
 */

import * as THREE from "three";
import type { StoredTile, SceneRecord } from "./store.js";
import { vertexColors, depthColor } from "./colors.js";
import { skyColor, haloIntensity, clamp01 } from "./atmosphere.js";
import { treePlacement, cloudPlacement, isTree, isCloud, CLOUD_RADIUS_M } from "./scene.js";
import type { EphemerisState } from "./ephemeris.js";

export type DebugMode = "off" | "wireframe" | "depth";

interface TileEntry {
  stored: StoredTile;
  mesh: THREE.Mesh;
  geometry: THREE.BufferGeometry;
  animated: boolean;
}

const HALO_VERT = `
varying vec3 vNormal;
varying vec3 vWorld;
void main() {
  vNormal = normalize(normalMatrix * normal);
  vWorld = (modelMatrix * vec4(position, 1.0)).xyz;
  gl_Position = projectionMatrix * modelViewMatrix * vec4(position, 1.0);
}`;

const HALO_FRAG = `
uniform vec3 sunDir;
uniform float shadowBoost;
varying vec3 vNormal;
varying vec3 vWorld;
void main() {
  vec3 view = normalize(-vWorld);
  float rim = pow(1.0 - abs(dot(vNormal, view)), 6.0);
  float sun = clamp((1.0 - dot(normalize(sunDir), normalize(vWorld))) * 0.5, 0.0, 1.0);
  float w = rim * (0.35 + 0.65 * sun * shadowBoost);
  vec3 tint = mix(vec3(0.5, 0.75, 1.0), vec3(0.95, 0.55, 0.45), sun * 0.5);
  gl_FragColor = vec4(tint * w, w);
}`;

export class PlanetRenderer {
  readonly renderer: THREE.WebGLRenderer;
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private tiles = new Map<string, TileEntry>();
  private treeMesh: THREE.Group | null = null;
  private cloudMesh: THREE.Group | null = null;
  private halo: THREE.Mesh;
  private haloFailed = false;
  private sun: THREE.DirectionalLight;
  private debugMode: DebugMode = "off";
  private lastColorUpdate = -1;

  constructor(canvas: HTMLCanvasElement, readonly baseRadius: number) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true, logarithmicDepthBuffer: true });
    this.camera = new THREE.PerspectiveCamera(60, 1, 0.5, baseRadius * 40);
    this.sun = new THREE.DirectionalLight(0xffffff, 2.4);
    this.scene.add(this.sun);
    this.scene.add(new THREE.AmbientLight(0x889099, 0.35));

    // slightly inflated shell rendered from behind for the limb halo;
    // on shader trouble we fall back to a flat additive shell
    let material: THREE.Material;
    try {
      material = new THREE.ShaderMaterial({
        vertexShader: HALO_VERT,
        fragmentShader: HALO_FRAG,
        uniforms: { sunDir: { value: new THREE.Vector3(1, 0, 0) }, shadowBoost: { value: 1.0 } },
        side: THREE.BackSide,
        transparent: true,
        depthWrite: false,
        blending: THREE.AdditiveBlending,
      });
    } catch {
      this.haloFailed = true;
      material = new THREE.MeshBasicMaterial({
        color: 0x6fa0d8,
        transparent: true,
        opacity: 0.12,
        side: THREE.BackSide,
        depthWrite: false,
      });
    }
    this.halo = new THREE.Mesh(new THREE.SphereGeometry(1.035, 96, 64), material);
    this.halo.scale.setScalar(baseRadius);
    this.scene.add(this.halo);
    this.renderer.debug.onShaderError = () => {
      if (!this.haloFailed) {
        this.haloFailed = true;
        this.halo.material = new THREE.MeshBasicMaterial({
          color: 0x6fa0d8,
          transparent: true,
          opacity: 0.12,
          side: THREE.BackSide,
          depthWrite: false,
        });
      }
    };
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
  }

  addTile(addr: string, stored: StoredTile, timeS: number): void {
    const tile = stored.tile;
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute("position", new THREE.BufferAttribute(stored.stitched, 3));
    geometry.setAttribute("normal", new THREE.BufferAttribute(tile.normals, 3));
    geometry.setAttribute("color", new THREE.BufferAttribute(vertexColors(tile, timeS), 3));
    geometry.setIndex(new THREE.BufferAttribute(tile.indices, 1));
    const material = new THREE.MeshLambertMaterial({ vertexColors: true });
    const mesh = new THREE.Mesh(geometry, material);
    mesh.frustumCulled = false; // positions are relative; bounding spheres mislead
    const animated =
      tile.node.depth >= 6 && (tile.biomes.includes(0) || tile.biomes.includes(5));
    this.tiles.set(addr, { stored, mesh, geometry, animated });
    this.applyDebug(this.tiles.get(addr)!);
    this.scene.add(mesh);
  }

  removeTile(addr: string): void {
    const entry = this.tiles.get(addr);
    if (!entry) return;
    this.scene.remove(entry.mesh);
    entry.geometry.dispose();
    (entry.mesh.material as THREE.Material).dispose();
    this.tiles.delete(addr);
  }

  clearTiles(): void {
    for (const addr of [...this.tiles.keys()]) this.removeTile(addr);
    if (this.treeMesh) this.scene.remove(this.treeMesh);
    if (this.cloudMesh) this.scene.remove(this.cloudMesh);
    this.treeMesh = null;
    this.cloudMesh = null;
  }

  restitchTile(addr: string, stored: StoredTile): void {
    const entry = this.tiles.get(addr);
    if (!entry) return;
    entry.stored = stored;
    entry.geometry.setAttribute("position", new THREE.BufferAttribute(stored.stitched, 3));
    entry.geometry.attributes.position.needsUpdate = true;
  }

  setSceneRecords(records: SceneRecord[]): void {
    if (this.treeMesh) this.scene.remove(this.treeMesh);
    if (this.cloudMesh) this.scene.remove(this.cloudMesh);
    this.treeMesh = new THREE.Group();
    this.cloudMesh = new THREE.Group();

    const trunkGeo = new THREE.CylinderGeometry(0.25, 0.4, 1, 5);
    trunkGeo.translate(0, 0.5, 0); // pivot at the bottom
    const trunkMat = new THREE.MeshLambertMaterial({ color: 0x6b4a2f });
    const canopyMat = new THREE.MeshLambertMaterial({ color: 0x2d5a27 });
    const palmMat = new THREE.MeshLambertMaterial({ color: 0x3f7a33 });
    const canopyGeo = new THREE.IcosahedronGeometry(1, 1);
    const palmGeo = new THREE.ConeGeometry(1, 0.6, 6);
    const cloudGeo = new THREE.IcosahedronGeometry(1, 1);
    const cloudMat = new THREE.MeshLambertMaterial({
      color: 0xf4f6f9,
      transparent: true,
      opacity: 0.8,
    });

    const up = new THREE.Vector3();
    const yAxis = new THREE.Vector3(0, 1, 0);
    const q = new THREE.Quaternion();
    for (const rec of records) {
      if (isTree(rec)) {
        const p = treePlacement(rec);
        up.set(p.up.x, p.up.y, p.up.z);
        q.setFromUnitVectors(yAxis, up);

        const trunk = new THREE.Mesh(trunkGeo, trunkMat);
        trunk.position.set(p.trunkBottom.x, p.trunkBottom.y, p.trunkBottom.z);
        trunk.quaternion.copy(q);
        trunk.scale.set(rec.scale, p.trunkLength, rec.scale);
        this.treeMesh.add(trunk);

        const canopy = new THREE.Mesh(p.palm ? palmGeo : canopyGeo, p.palm ? palmMat : canopyMat);
        canopy.position.set(p.trunkTop.x, p.trunkTop.y, p.trunkTop.z);
        canopy.quaternion.copy(q);
        canopy.rotateY(p.rotation);
        canopy.scale.setScalar(p.canopyRadius);
        this.treeMesh.add(canopy);
      } else if (isCloud(rec)) {
        const c = cloudPlacement(rec);
        const puff = new THREE.Mesh(cloudGeo, cloudMat);
        puff.position.set(c.center.x, c.center.y, c.center.z);
        puff.rotation.y = c.rotation;
        puff.scale.set(c.radius, c.radius * 0.45, CLOUD_RADIUS_M * 0.8);
        this.cloudMesh.add(puff);
      }
    }
    this.scene.add(this.treeMesh);
    this.scene.add(this.cloudMesh);
  }

  setDebugMode(mode: DebugMode): void {
    this.debugMode = mode;
    for (const entry of this.tiles.values()) this.applyDebug(entry);
  }

  private applyDebug(entry: TileEntry): void {
    const mat = entry.mesh.material as THREE.MeshLambertMaterial;
    mat.wireframe = this.debugMode === "wireframe";
    if (this.debugMode === "depth") {
      const [r, g, b] = depthColor(entry.stored.tile.node.depth);
      mat.color.setRGB(r, g, b);
      mat.vertexColors = false;
    } else {
      mat.color.setRGB(1, 1, 1);
      mat.vertexColors = true;
    }
    mat.needsUpdate = true;
  }

  /** cameraWorld is f64 planetary coordinates; GL space is camera-relative. */
  render(
    cameraWorld: [number, number, number],
    look: [number, number, number],
    timeS: number,
    eph: EphemerisState,
  ): void {
    for (const entry of this.tiles.values()) {
      const c = entry.stored.tile.center;
      entry.mesh.position.set(
        c[0] - cameraWorld[0],
        c[1] - cameraWorld[1],
        c[2] - cameraWorld[2],
      );
    }
    if (this.treeMesh) this.treeMesh.position.set(-cameraWorld[0], -cameraWorld[1], -cameraWorld[2]);
    if (this.cloudMesh) this.cloudMesh.position.set(-cameraWorld[0], -cameraWorld[1], -cameraWorld[2]);
    this.halo.position.set(-cameraWorld[0], -cameraWorld[1], -cameraWorld[2]);

    this.camera.position.set(0, 0, 0);
    this.camera.up.set(cameraWorld[0], cameraWorld[1], cameraWorld[2]).normalize();
    this.camera.lookAt(look[0], look[1], look[2]);

    const sun = new THREE.Vector3(...eph.sunDirection);
    this.sun.position.copy(sun).multiplyScalar(this.baseRadius * 4);
    this.sun.target.position.set(-cameraWorld[0], -cameraWorld[1], -cameraWorld[2]);
    this.sun.target.updateMatrixWorld();

    const camR = Math.hypot(...cameraWorld);
    const upDotSun =
      (cameraWorld[0] * sun.x + cameraWorld[1] * sun.y + cameraWorld[2] * sun.z) / camR;
    const inAtmosphere = camR < this.baseRadius * 1.02;
    if (inAtmosphere) {
      const [r, g, b] = skyColor(upDotSun);
      this.renderer.setClearColor(new THREE.Color(r, g, b), 1);
    } else {
      this.renderer.setClearColor(0x000004, 1);
    }
    const mat = this.halo.material as THREE.ShaderMaterial;
    if (!this.haloFailed && mat.uniforms) {
      mat.uniforms.sunDir.value.copy(sun);
      mat.uniforms.shadowBoost.value = 0.5 + 0.5 * clamp01(haloIntensity(1, -upDotSun) * 2);
    }

    if (timeS - this.lastColorUpdate > 0.1) {
      this.lastColorUpdate = timeS;
      let budget = 200;
      for (const entry of this.tiles.values()) {
        if (!entry.animated || budget-- <= 0) continue;
        entry.geometry.setAttribute(
          "color",
          new THREE.BufferAttribute(vertexColors(entry.stored.tile, timeS), 3),
        );
      }
    }
    this.renderer.render(this.scene, this.camera);
  }
}
