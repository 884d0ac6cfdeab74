// @vitest-environment happy-dom
import { beforeEach, describe, expect, it } from "vitest";

import { BoardRenderer, ROLE_FILL, STICKER_FILL } from "../src/render.js";
import type { MapDocument } from "../src/types.js";

const MAP: MapDocument = {
  nodes: [
    { term: "hot", role: "key", display_color: "red", sources: [6059], position: [0, 0] },
    { term: "season", role: "foundation", display_color: "black", sources: [6059], position: [1, 0] },
    { term: "cold", role: "foundation", display_color: "black", sources: [6059], position: [0, 1] },
    { term: "#6059", role: "entity_anchor", display_color: "anchor", sources: [6059], position: [1, 1] },
  ],
  edges: [
    { a: "cold", b: "season", weight: 1, kind: "island_link" },
    { a: "hot", b: "season", weight: 1, kind: "bridge_link" },
  ],
  islands: [["cold", "season"]],
  params: { nf: 30, nl: 30, nk: 12 },
  seed: 0,
};

let host: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  host = document.createElement("div");
  document.body.appendChild(host);
});

describe("map rendering", () => {
  it("every node's fill matches its role", () => {
    const renderer = new BoardRenderer(host);
    renderer.renderMap(MAP);
    const groups = [...host.querySelectorAll<SVGGElement>(".map-node")];
    expect(groups).toHaveLength(MAP.nodes.length);
    for (const group of groups) {
      const role = group.getAttribute("data-role") as keyof typeof ROLE_FILL;
      const shape = group.querySelector("circle, rect");
      expect(shape?.getAttribute("fill")).toBe(ROLE_FILL[role]);
    }
  });

  it("anchors draw as squares, other roles as circles", () => {
    const renderer = new BoardRenderer(host);
    renderer.renderMap(MAP);
    const anchor = host.querySelector('[data-term="#6059"]');
    expect(anchor?.querySelector("rect")).toBeTruthy();
    const key = host.querySelector('[data-term="hot"]');
    expect(key?.querySelector("circle")).toBeTruthy();
  });

  it("hovering metadata carries source entity ids", () => {
    const renderer = new BoardRenderer(host);
    renderer.renderMap(MAP);
    const title = host.querySelector('[data-term="hot"] title');
    expect(title?.textContent).toContain("6059");
  });

  it("malformed documents show the error panel instead of throwing", () => {
    const renderer = new BoardRenderer(host);
    const broken = { nodes: [{ term: "x" }], edges: [] } as unknown as MapDocument;
    expect(() => renderer.renderMap(broken)).not.toThrow();
    const panel = host.querySelector<HTMLElement>(".error-panel");
    expect(panel?.style.display).toBe("block");
    expect(host.querySelectorAll(".map-node")).toHaveLength(0);
  });

  it("a good render clears a previous error", () => {
    const renderer = new BoardRenderer(host);
    renderer.renderMap({} as MapDocument);
    renderer.renderMap(MAP);
    expect(host.querySelector<HTMLElement>(".error-panel")?.style.display).toBe("none");
  });
});

describe("sticker rendering", () => {
  it("kinds map to their colors and pending stickers are translucent", () => {
    const renderer = new BoardRenderer(host);
    renderer.renderMap(MAP);
    renderer.renderStickers([
      {
        sticker_id: "r1", session_id: "s", map_id: "m", kind: "requirement",
        text: "need", position: [0, 0], author: "a", created_at: "",
        anchored_terms: [], answers: null, pending: false,
      },
      {
        sticker_id: "s1", session_id: "s", map_id: "m", kind: "solution",
        text: "idea", position: [1, 1], author: "b", created_at: "",
        anchored_terms: [], answers: "r1", pending: true,
      },
    ]);
    const requirement = host.querySelector('[data-sticker-id="r1"] rect');
    const solution = host.querySelector('[data-sticker-id="s1"] rect');
    expect(requirement?.getAttribute("fill")).toBe(STICKER_FILL.requirement);
    expect(solution?.getAttribute("fill")).toBe(STICKER_FILL.solution);
    expect(solution?.getAttribute("opacity")).toBe("0.5");
    expect(host.querySelector('[data-sticker-id="s1"]')?.getAttribute("data-pending")).toBe("true");
  });
});
