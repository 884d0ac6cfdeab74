/** Board view model: server state at the last applied seq plus local
 * pending actions.
 *
 * Placements are optimistic: the sticker renders immediately with a
 * client-generated id, the same id is sent to the server, and the pending
 * copy is dropped the moment the matching event comes back on the stream.
 * A rejected request rolls the pending copy back.
 */

import type {
  SessionEventDoc,
  StateDoc,
  StickerDoc,
  StickerKind,
} from "./types.js";

export interface BoardSticker extends StickerDoc {
  pending: boolean;
}

let localCounter = 0;

function nextLocalId(author: string): string {
  localCounter += 1;
  const noise = Math.random().toString(36).slice(2, 8);
  return `c-${author}-${localCounter}-${noise}`;
}

export class BoardViewModel {
  lastAppliedSeq = 0;
  maps: Record<string, string> = {};
  preferences: Record<string, string> = {};
  private confirmed = new Map<string, StickerDoc>();
  private pendingStickers = new Map<string, StickerDoc>();

  constructor(
    readonly sessionId: string,
    readonly author: string,
  ) {}

  loadSnapshot(state: StateDoc): void {
    this.lastAppliedSeq = state.latest_seq;
    this.maps = { ...state.maps };
    this.preferences = { ...state.preferences };
    this.confirmed.clear();
    for (const sticker of state.stickers) {
      this.confirmed.set(sticker.sticker_id, sticker);
    }
  }

  /** Fold one streamed event; duplicates below the watermark are ignored. */
  applyServerEvent(event: SessionEventDoc): void {
    if (event.seq <= this.lastAppliedSeq) return;
    this.lastAppliedSeq = event.seq;
    switch (event.type) {
      case "attach_map":
        this.maps[event.map_id as string] = event.map_hash as string;
        break;
      case "place_sticker": {
        const stickerId = event.sticker_id as string;
        this.pendingStickers.delete(stickerId);
        this.confirmed.set(stickerId, {
          sticker_id: stickerId,
          session_id: this.sessionId,
          map_id: event.map_id as string,
          kind: event.kind as StickerKind,
          text: (event.text as string) ?? "",
          position: event.position as [number, number],
          author: event.author as string,
          created_at: event.ts,
          anchored_terms: (event.anchored_terms as string[]) ?? [],
          answers: (event.answers as string | undefined) ?? null,
        });
        break;
      }
      case "edit_sticker": {
        const existing = this.confirmed.get(event.sticker_id as string);
        if (!existing) break;
        this.confirmed.set(existing.sticker_id, {
          ...existing,
          text: (event.text as string | undefined) ?? existing.text,
          position:
            (event.position as [number, number] | undefined) ??
            existing.position,
        });
        break;
      }
      case "delete_sticker":
        this.confirmed.delete(event.sticker_id as string);
        break;
      case "cast_preference":
        this.preferences[event.participant as string] = event.map_id as string;
        break;
      default:
        break;
    }
  }

  /** Optimistically add a placement; returns the client-side sticker id. */
  stageSticker(
    mapId: string,
    kind: StickerKind,
    text: string,
    position: [number, number],
    answers?: string,
  ): string {
    const stickerId = nextLocalId(this.author);
    this.pendingStickers.set(stickerId, {
      sticker_id: stickerId,
      session_id: this.sessionId,
      map_id: mapId,
      kind,
      text,
      position,
      author: this.author,
      created_at: "",
      anchored_terms: [],
      answers: answers ?? null,
    });
    return stickerId;
  }

  /** Roll back a staged placement the server refused. */
  dropPending(stickerId: string): void {
    this.pendingStickers.delete(stickerId);
  }

  hasPending(): boolean {
    return this.pendingStickers.size > 0;
  }

  stickers(mapId?: string): BoardSticker[] {
    const out: BoardSticker[] = [];
    for (const sticker of this.confirmed.values()) {
      if (!mapId || sticker.map_id === mapId) out.push({ ...sticker, pending: false });
    }
    for (const sticker of this.pendingStickers.values()) {
      if (!mapId || sticker.map_id === mapId) out.push({ ...sticker, pending: true });
    }
    return out.sort((a, b) => a.sticker_id.localeCompare(b.sticker_id));
  }

  /** Canonical content signature: equal signatures at the same seq mean
   * two clients render identical sticker sets. */
  signature(): string {
    const body = this.stickers()
      .filter((s) => !s.pending)
      .map(
        (s) =>
          `${s.sticker_id}|${s.map_id}|${s.kind}|${s.text}|${s.position[0]},${s.position[1]}|${s.answers ?? ""}`,
      )
      .join(";");
    return `${this.lastAppliedSeq}#${body}`;
  }
}
