/** SVG board renderer: the map layer (read-only) plus the sticker layer.
 *
 * Foundations draw black, bridge keys red, entity anchors as gray squares;
 * hovering a node reveals its source entity ids. The whole scene pans by
 * dragging and zooms on the wheel. Clicks on the background report map
 * coordinates so the page can place stickers.
 */

import type { BoardSticker } from "./model.js";
import type { MapDocument, NodeRole } from "./types.js";

export const ROLE_FILL: Record<NodeRole, string> = {
  foundation: "#000000",
  key: "#cc0000",
  entity_anchor: "#8888aa",
};

export const STICKER_FILL: Record<string, string> = {
  requirement: "#f4d03f",
  solution: "#5dade2",
};

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_RADIUS = 7;

export interface RendererOptions {
  onBackgroundClick?: (mapX: number, mapY: number) => void;
  onStickerClick?: (stickerId: string) => void;
}

interface ViewTransform {
  x: number;
  y: number;
  scale: number;
}

export class BoardRenderer {
  private svg: SVGSVGElement;
  private view: SVGGElement;
  private mapLayer: SVGGElement;
  private stickerLayer: SVGGElement;
  private errorPanel: HTMLElement;
  private transform: ViewTransform = { x: 0, y: 0, scale: 40 };
  private panning = false;
  private panStart = { x: 0, y: 0, tx: 0, ty: 0 };
  private moved = false;

  constructor(
    private container: HTMLElement,
    private options: RendererOptions = {},
  ) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("class", "board-canvas");
    this.svg.setAttribute("width", "100%");
    this.svg.setAttribute("height", "100%");
    this.view = document.createElementNS(SVG_NS, "g");
    this.mapLayer = document.createElementNS(SVG_NS, "g");
    this.mapLayer.setAttribute("class", "map-layer");
    this.stickerLayer = document.createElementNS(SVG_NS, "g");
    this.stickerLayer.setAttribute("class", "sticker-layer");
    this.view.appendChild(this.mapLayer);
    this.view.appendChild(this.stickerLayer);
    this.svg.appendChild(this.view);

    this.errorPanel = document.createElement("div");
    this.errorPanel.className = "error-panel";
    this.errorPanel.style.display = "none";

    container.appendChild(this.svg);
    container.appendChild(this.errorPanel);
    this.bindInteraction();
    this.applyTransform();
  }

  /** Draw a map document; malformed input shows the error panel instead
   * of throwing. */
  renderMap(doc: MapDocument): void {
    try {
      if (!doc || !Array.isArray(doc.nodes) || !Array.isArray(doc.edges)) {
        throw new Error("map document needs nodes and edges arrays");
      }
      const positions = new Map<string, [number, number]>();
      for (const node of doc.nodes) {
        if (
          typeof node.term !== "string" ||
          !Array.isArray(node.position) ||
          node.position.length !== 2 ||
          !(node.role in ROLE_FILL)
        ) {
          throw new Error(`bad node entry: ${JSON.stringify(node)}`);
        }
        positions.set(node.term, node.position);
      }
      this.mapLayer.textContent = "";
      for (const edge of doc.edges) {
        const a = positions.get(edge.a);
        const b = positions.get(edge.b);
        if (!a || !b) throw new Error(`edge endpoint missing: ${edge.a} -- ${edge.b}`);
        const line = document.createElementNS(SVG_NS, "line");
        line.setAttribute("x1", String(a[0]));
        line.setAttribute("y1", String(a[1]));
        line.setAttribute("x2", String(b[0]));
        line.setAttribute("y2", String(b[1]));
        line.setAttribute("stroke", "#b8b8b8");
        line.setAttribute("stroke-width", "0.04");
        if (edge.kind === "bridge_link") line.setAttribute("stroke-dasharray", "0.1 0.05");
        this.mapLayer.appendChild(line);
      }
      for (const node of doc.nodes) {
        const [x, y] = node.position;
        const group = document.createElementNS(SVG_NS, "g");
        group.setAttribute("class", "map-node");
        group.setAttribute("data-term", node.term);
        group.setAttribute("data-role", node.role);
        let shape: SVGElement;
        if (node.role === "entity_anchor") {
          shape = document.createElementNS(SVG_NS, "rect");
          const side = (NODE_RADIUS * 2) / 40;
          shape.setAttribute("x", String(x - side / 2));
          shape.setAttribute("y", String(y - side / 2));
          shape.setAttribute("width", String(side));
          shape.setAttribute("height", String(side));
        } else {
          shape = document.createElementNS(SVG_NS, "circle");
          shape.setAttribute("cx", String(x));
          shape.setAttribute("cy", String(y));
          shape.setAttribute("r", String(NODE_RADIUS / 40));
        }
        shape.setAttribute("fill", ROLE_FILL[node.role]);
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = node.sources.length
          ? `${node.term} - from ${node.sources.join(", ")}`
          : node.term;
        group.appendChild(title);
        group.appendChild(shape);
        const label = document.createElementNS(SVG_NS, "text");
        label.setAttribute("x", String(x + 0.25));
        label.setAttribute("y", String(y + 0.08));
        label.setAttribute("font-size", "0.22");
        label.textContent = node.term.replace(/^#/, "");
        group.appendChild(label);
        this.mapLayer.appendChild(group);
      }
      this.errorPanel.style.display = "none";
    } catch (error) {
      this.mapLayer.textContent = "";
      this.errorPanel.textContent = `Cannot draw this map: ${(error as Error).message}`;
      this.errorPanel.style.display = "block";
    }
  }

  renderStickers(stickers: BoardSticker[]): void {
    this.stickerLayer.textContent = "";
    for (const sticker of stickers) {
      const [x, y] = sticker.position;
      const group = document.createElementNS(SVG_NS, "g");
      group.setAttribute("class", "sticker");
      group.setAttribute("data-sticker-id", sticker.sticker_id);
      group.setAttribute("data-kind", sticker.kind);
      if (sticker.pending) group.setAttribute("data-pending", "true");
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(x));
      rect.setAttribute("y", String(y));
      rect.setAttribute("width", "1.4");
      rect.setAttribute("height", "0.6");
      rect.setAttribute("rx", "0.06");
      rect.setAttribute("fill", STICKER_FILL[sticker.kind] ?? "#cccccc");
      rect.setAttribute("opacity", sticker.pending ? "0.5" : "0.92");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${sticker.kind} by ${sticker.author}${
        sticker.answers ? ` (answers ${sticker.answers})` : ""
      }`;
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(x + 0.08));
      label.setAttribute("y", String(y + 0.35));
      label.setAttribute("font-size", "0.18");
      label.textContent =
        sticker.text.length > 18 ? `${sticker.text.slice(0, 17)}…` : sticker.text;
      group.appendChild(title);
      group.appendChild(rect);
      group.appendChild(label);
      group.addEventListener("click", (event) => {
        event.stopPropagation();
        this.options.onStickerClick?.(sticker.sticker_id);
      });
      this.stickerLayer.appendChild(group);
    }
  }

  screenToMap(clientX: number, clientY: number): [number, number] {
    const bounds = this.svg.getBoundingClientRect();
    const x = (clientX - bounds.left - this.transform.x) / this.transform.scale;
    const y = (clientY - bounds.top - this.transform.y) / this.transform.scale;
    return [Math.round(x * 1000) / 1000, Math.round(y * 1000) / 1000];
  }

  private applyTransform(): void {
    this.view.setAttribute(
      "transform",
      `translate(${this.transform.x} ${this.transform.y}) scale(${this.transform.scale})`,
    );
  }

  private bindInteraction(): void {
    this.svg.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
      const bounds = this.svg.getBoundingClientRect();
      const px = event.clientX - bounds.left;
      const py = event.clientY - bounds.top;
      // keep the point under the cursor fixed while scaling
      this.transform.x = px - (px - this.transform.x) * factor;
      this.transform.y = py - (py - this.transform.y) * factor;
      this.transform.scale *= factor;
      this.applyTransform();
    });
    this.svg.addEventListener("mousedown", (event) => {
      this.panning = true;
      this.moved = false;
      this.panStart = {
        x: event.clientX,
        y: event.clientY,
        tx: this.transform.x,
        ty: this.transform.y,
      };
    });
    this.svg.addEventListener("mousemove", (event) => {
      if (!this.panning) return;
      const dx = event.clientX - this.panStart.x;
      const dy = event.clientY - this.panStart.y;
      if (Math.abs(dx) + Math.abs(dy) > 3) this.moved = true;
      this.transform.x = this.panStart.tx + dx;
      this.transform.y = this.panStart.ty + dy;
      this.applyTransform();
    });
    this.svg.addEventListener("mouseup", (event) => {
      const wasPanning = this.panning && this.moved;
      this.panning = false;
      if (!wasPanning) {
        const [x, y] = this.screenToMap(event.clientX, event.clientY);
        this.options.onBackgroundClick?.(x, y);
      }
    });
    this.svg.addEventListener("mouseleave", () => {
      this.panning = false;
    });
  }
}
