/** Wire types for the session service HTTP/WebSocket API. */

export type NodeRole = "foundation" | "key" | "entity_anchor";
export type LinkKind = "island_link" | "bridge_link";
export type StickerKind = "requirement" | "solution";

export interface MapNodeDoc {
  term: string;
  role: NodeRole;
  display_color: string;
  sources: number[];
  position: [number, number];
}

export interface MapEdgeDoc {
  a: string;
  b: string;
  weight: number;
  kind: LinkKind;
}

export interface MapDocument {
  nodes: MapNodeDoc[];
  edges: MapEdgeDoc[];
  islands: string[][];
  params: { nf: number; nl: number; nk: number };
  seed: number;
}

export interface StickerDoc {
  sticker_id: string;
  session_id: string;
  map_id: string;
  kind: StickerKind;
  text: string;
  position: [number, number];
  author: string;
  created_at: string;
  anchored_terms: string[];
  answers?: string | null;
}

export interface SessionEventDoc {
  seq: number;
  ts: string;
  type:
    | "create_session"
    | "attach_map"
    | "place_sticker"
    | "edit_sticker"
    | "delete_sticker"
    | "cast_preference";
  [field: string]: unknown;
}

export interface StateDoc {
  session_id: string;
  title: string;
  latest_seq: number;
  maps: Record<string, string>;
  stickers: StickerDoc[];
  preferences: Record<string, string>;
  events: SessionEventDoc[];
}

export interface EventAck {
  seq: number;
  sticker_id?: string | null;
}

export interface MapTallyDoc {
  requirements: number;
  solutions: number;
  preference_votes: number;
}

export interface TallyDoc {
  session_id: string;
  maps: Record<string, MapTallyDoc>;
}

export interface PlaceStickerRequest {
  type: "place_sticker";
  sticker_id?: string;
  map_id: string;
  kind: StickerKind;
  text: string;
  position: [number, number];
  author: string;
  anchored_terms?: string[];
  answers?: string;
}

export interface EditStickerRequest {
  type: "edit_sticker";
  sticker_id: string;
  author: string;
  text?: string;
  position?: [number, number];
  base_seq?: number;
}

export interface DeleteStickerRequest {
  type: "delete_sticker";
  sticker_id: string;
  author: string;
}

export interface CastPreferenceRequest {
  type: "cast_preference";
  participant: string;
  map_id: string;
}

export type EventRequest =
  | PlaceStickerRequest
  | EditStickerRequest
  | DeleteStickerRequest
  | CastPreferenceRequest;
