import { describe, expect, it } from "vitest";

import { BoardViewModel } from "../src/model.js";
import type { SessionEventDoc, StateDoc } from "../src/types.js";

function placeEvent(
  seq: number,
  stickerId: string,
  overrides: Record<string, unknown> = {},
): SessionEventDoc {
  return {
    seq,
    ts: `2024-01-01T00:00:${String(seq).padStart(2, "0")}Z`,
    type: "place_sticker",
    sticker_id: stickerId,
    map_id: "m",
    kind: "requirement",
    text: "note",
    position: [1, 2],
    author: "alice",
    anchored_terms: [],
    ...overrides,
  };
}

const EMPTY_STATE: StateDoc = {
  session_id: "s",
  title: "",
  latest_seq: 2,
  maps: { m: "hash" },
  stickers: [],
  preferences: {},
  events: [],
};

describe("BoardViewModel folding", () => {
  it("applies place, edit, delete in seq order", () => {
    const model = new BoardViewModel("s", "alice");
    model.loadSnapshot(EMPTY_STATE);
    model.applyServerEvent(placeEvent(3, "a"));
    model.applyServerEvent({
      seq: 4, ts: "", type: "edit_sticker", sticker_id: "a", text: "edited",
    });
    expect(model.stickers()[0]?.text).toBe("edited");
    model.applyServerEvent({ seq: 5, ts: "", type: "delete_sticker", sticker_id: "a" });
    expect(model.stickers()).toHaveLength(0);
    expect(model.lastAppliedSeq).toBe(5);
  });

  it("ignores duplicates at or below the watermark", () => {
    const model = new BoardViewModel("s", "alice");
    model.loadSnapshot(EMPTY_STATE);
    model.applyServerEvent(placeEvent(3, "a"));
    model.applyServerEvent(placeEvent(3, "a", { text: "replayed" }));
    expect(model.stickers()[0]?.text).toBe("note");
  });

  it("tracks preference revotes", () => {
    const model = new BoardViewModel("s", "alice");
    model.loadSnapshot(EMPTY_STATE);
    model.applyServerEvent({ seq: 3, ts: "", type: "cast_preference", participant: "p", map_id: "m" });
    model.applyServerEvent({ seq: 4, ts: "", type: "attach_map", map_id: "n", map_hash: "h2" });
    model.applyServerEvent({ seq: 5, ts: "", type: "cast_preference", participant: "p", map_id: "n" });
    expect(model.preferences).toEqual({ p: "n" });
    expect(model.maps).toEqual({ m: "hash", n: "h2" });
  });
});

describe("optimistic placement", () => {
  it("stages a pending sticker and confirms it on the matching event", () => {
    const model = new BoardViewModel("s", "alice");
    model.loadSnapshot(EMPTY_STATE);
    const id = model.stageSticker("m", "solution", "try this", [3, 4]);
    expect(model.stickers().map((s) => s.pending)).toEqual([true]);

    model.applyServerEvent(placeEvent(3, id, { kind: "solution", text: "try this", author: "alice" }));
    const stickers = model.stickers();
    expect(stickers).toHaveLength(1);
    expect(stickers[0]?.pending).toBe(false);
    expect(model.hasPending()).toBe(false);
  });

  it("rolls a rejected placement back", () => {
    const model = new BoardViewModel("s", "alice");
    model.loadSnapshot(EMPTY_STATE);
    const id = model.stageSticker("m", "requirement", "oops", [0, 0]);
    model.dropPending(id);
    expect(model.stickers()).toHaveLength(0);
  });

  it("rendered state is server state plus pending actions", () => {
    const model = new BoardViewModel("s", "alice");
    model.loadSnapshot(EMPTY_STATE);
    model.applyServerEvent(placeEvent(3, "confirmed"));
    model.stageSticker("m", "requirement", "mine", [9, 9]);
    const byPending = new Map(model.stickers().map((s) => [s.pending, s]));
    expect(byPending.size).toBe(2);
  });
});

describe("two-client convergence", () => {
  it("clients that saw the same events render identical sticker sets", () => {
    const a = new BoardViewModel("s", "alice");
    const b = new BoardViewModel("s", "bob");
    a.loadSnapshot(EMPTY_STATE);
    b.loadSnapshot(EMPTY_STATE);

    // alice places optimistically; the server stream echoes to both
    const localId = a.stageSticker("m", "requirement", "from alice", [1, 1]);
    const events: SessionEventDoc[] = [
      placeEvent(3, localId, { text: "from alice" }),
      placeEvent(4, "from-bob", { author: "bob", kind: "solution", answers: localId }),
      { seq: 5, ts: "", type: "edit_sticker", sticker_id: "from-bob", text: "tuned" },
    ];
    for (const event of events) a.applyServerEvent(event);
    for (const event of events) b.applyServerEvent(event);

    expect(a.hasPending()).toBe(false);
    expect(a.signature()).toBe(b.signature());
  });
});
