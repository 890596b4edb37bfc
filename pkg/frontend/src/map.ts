/** Map rendering: web-mercator projection onto a plain coordinate pane.
 *
 * Static layers (tiles, geofence circles, POI and parking markers) are
 * built once per pack; position updates only move the red user marker.
 * Tiles are a progressive enhancement: when images cannot load the pane
 * stays a plain coordinate canvas, which keeps the map testable offline.
 */

import type { PackView, PoiView } from "./api.js";

export const TOPIC_PALETTE = [
  "#2563eb", "#d97706", "#059669", "#9333ea", "#dc2626", "#0891b2",
] as const;

interface WorldPoint {
  x: number; // mercator world coordinate in [0, 1)
  y: number;
}

function toWorld(lat: number, lon: number): WorldPoint {
  const phi = (lat * Math.PI) / 180;
  return {
    x: (lon + 180) / 360,
    y: (1 - Math.log(Math.tan(phi) + 1 / Math.cos(phi)) / Math.PI) / 2,
  };
}

export class MapView {
  private bounds = { minX: 0, minY: 0, maxX: 1, maxY: 1 };
  private readonly tileLayer: HTMLElement;
  private readonly staticLayer: HTMLElement;
  private readonly userMarker: HTMLElement;
  private readonly attribution: HTMLElement;
  private selectHandler: ((lat: number, lon: number) => void) | null = null;
  private poiHandler: ((poi: PoiView) => void) | null = null;
  private topicColor = new Map<string, string>();

  constructor(private readonly container: HTMLElement) {
    container.classList.add("map-pane");
    this.tileLayer = this.layer("tile-layer");
    this.staticLayer = this.layer("static-layer");
    this.userMarker = document.createElement("div");
    this.userMarker.className = "marker user-marker";
    this.userMarker.title = "You";
    this.userMarker.hidden = true;
    container.appendChild(this.userMarker);
    this.attribution = document.createElement("div");
    this.attribution.className = "map-attribution";
    container.appendChild(this.attribution);

    container.addEventListener("click", (event) => {
      if (!this.selectHandler) return;
      if ((event.target as HTMLElement).closest(".marker")) return;
      const rect = container.getBoundingClientRect();
      if (rect.width === 0 || rect.height === 0) return;
      const fx = (event.clientX - rect.left) / rect.width;
      const fy = (event.clientY - rect.top) / rect.height;
      this.selectHandler(...this.unproject(fx, fy));
    });
  }

  private layer(className: string): HTMLElement {
    const element = document.createElement("div");
    element.className = `map-layer ${className}`;
    this.container.appendChild(element);
    return element;
  }

  colorFor(topic: string): string {
    return this.topicColor.get(topic) ?? "#64748b";
  }

  /** Percent position of a coordinate inside the current viewport. */
  project(lat: number, lon: number): { xPct: number; yPct: number } {
    const w = toWorld(lat, lon);
    const { minX, minY, maxX, maxY } = this.bounds;
    return {
      xPct: ((w.x - minX) / (maxX - minX)) * 100,
      yPct: ((w.y - minY) / (maxY - minY)) * 100,
    };
  }

  private unproject(fx: number, fy: number): [number, number] {
    const { minX, minY, maxX, maxY } = this.bounds;
    const x = minX + fx * (maxX - minX);
    const y = minY + fy * (maxY - minY);
    const lon = x * 360 - 180;
    const n = Math.PI * (1 - 2 * y);
    const lat = (Math.atan(Math.sinh(n)) * 180) / Math.PI;
    return [lat, lon];
  }

  setPack(pack: PackView): void {
    this.topicColor = new Map(pack.topics.map(
      (topic, i) => [topic, TOPIC_PALETTE[i % TOPIC_PALETTE.length]!]));

    const points = [
      ...pack.pois.map((p) => toWorld(p.lat, p.lon)),
      ...pack.parking.map((p) => toWorld(p.lat, p.lon)),
    ];
    if (points.length > 0) {
      const xs = points.map((p) => p.x);
      const ys = points.map((p) => p.y);
      const margin = Math.max(
        Math.max(...xs) - Math.min(...xs),
        Math.max(...ys) - Math.min(...ys),
        1e-5,
      ) * 0.2;
      this.bounds = {
        minX: Math.min(...xs) - margin,
        maxX: Math.max(...xs) + margin,
        minY: Math.min(...ys) - margin,
        maxY: Math.max(...ys) + margin,
      };
    }

    this.staticLayer.replaceChildren();
    for (const poi of pack.pois) {
      this.staticLayer.appendChild(this.geofenceCircle(poi));
      this.staticLayer.appendChild(this.poiMarker(poi));
    }
    for (const spot of pack.parking) {
      const marker = document.createElement("div");
      marker.className = "marker parking-marker";
      marker.textContent = "P";
      marker.title = spot.id;
      this.place(marker, spot.lat, spot.lon);
      this.staticLayer.appendChild(marker);
    }
    this.renderTiles();
  }

  private place(element: HTMLElement, lat: number, lon: number): void {
    const { xPct, yPct } = this.project(lat, lon);
    element.style.left = `${xPct}%`;
    element.style.top = `${yPct}%`;
  }

  private poiMarker(poi: PoiView): HTMLElement {
    const marker = document.createElement("button");
    marker.type = "button";
    marker.className = "marker poi-marker";
    marker.dataset.poiId = poi.id;
    marker.dataset.topic = poi.topic;
    marker.style.background = this.colorFor(poi.topic);
    marker.title = poi.name;
    this.place(marker, poi.lat, poi.lon);
    marker.addEventListener("click", () => this.poiHandler?.(poi));
    return marker;
  }

  private geofenceCircle(poi: PoiView): HTMLElement {
    const circle = document.createElement("div");
    circle.className = "geofence";
    circle.style.borderColor = this.colorFor(poi.topic);
    this.place(circle, poi.lat, poi.lon);
    // radius in viewport percent via the local meters-per-world-unit scale
    const { minX, maxX } = this.bounds;
    const metersPerWorldX = 40_075_016.686 * Math.cos((poi.lat * Math.PI) / 180);
    const widthPct = (poi.trigger_radius_m / metersPerWorldX / (maxX - minX)) * 200;
    circle.style.width = `${widthPct}%`;
    circle.style.height = `${widthPct}%`;
    return circle;
  }

  private renderTiles(): void {
    this.tileLayer.replaceChildren();
    this.attribution.textContent = "";
    const { minX, minY, maxX, maxY } = this.bounds;
    const zoom = Math.max(1, Math.min(17,
      Math.floor(Math.log2(1 / Math.max(maxX - minX, maxY - minY)))));
    const scale = 2 ** zoom;
    const added: HTMLImageElement[] = [];
    for (let tx = Math.floor(minX * scale); tx <= Math.floor(maxX * scale); tx++) {
      for (let ty = Math.floor(minY * scale); ty <= Math.floor(maxY * scale); ty++) {
        const img = document.createElement("img");
        img.className = "tile";
        img.alt = "";
        img.style.left = `${((tx / scale - minX) / (maxX - minX)) * 100}%`;
        img.style.top = `${((ty / scale - minY) / (maxY - minY)) * 100}%`;
        img.style.width = `${(1 / scale / (maxX - minX)) * 100}%`;
        img.style.height = `${(1 / scale / (maxY - minY)) * 100}%`;
        img.addEventListener("error", () => {
          // offline: drop the tile layer, keep the coordinate pane
          this.tileLayer.replaceChildren();
          this.attribution.textContent = "";
          this.container.classList.add("offline");
        }, { once: true });
        img.src = `https://tile.openstreetmap.org/${zoom}/${tx}/${ty}.png`;
        added.push(img);
      }
    }
    for (const img of added) this.tileLayer.appendChild(img);
    if (added.length > 0) this.attribution.textContent = "© OpenStreetMap contributors";
  }

  updateUser(lat: number, lon: number): void {
    this.userMarker.hidden = false;
    this.place(this.userMarker, lat, lon);
  }

  onSelect(handler: (lat: number, lon: number) => void): void {
    this.selectHandler = handler;
  }

  onPoiClick(handler: (poi: PoiView) => void): void {
    this.poiHandler = handler;
  }

  /** Static marker elements currently rendered (for incremental-update checks). */
  staticElements(): Element[] {
    return [...this.staticLayer.children];
  }
}
