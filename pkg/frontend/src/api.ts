/** Typed client for the session service. */

import type {
  EventAck,
  EventRequest,
  MapDocument,
  SessionEventDoc,
  StateDoc,
  TallyDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

/** Subset of the browser WebSocket surface the client needs; the `ws`
 * package satisfies it too, so node tests can inject it. */
export interface SocketLike {
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: ((event: unknown) => void) | null;
  onerror: ((event: unknown) => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface StreamHandle {
  close(): void;
}

async function decode<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SessionApi {
  private readonly socketFactory: SocketFactory;

  constructor(
    readonly baseUrl: string,
    socketFactory?: SocketFactory,
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.socketFactory =
      socketFactory ??
      ((url) => new WebSocket(url) as unknown as SocketLike);
  }

  async createSession(sessionId?: string, title = ""): Promise<string> {
    const body = await decode<{ session_id: string }>(
      await fetch(`${this.baseUrl}/sessions`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ session_id: sessionId ?? null, title }),
      }),
    );
    return body.session_id;
  }

  async attachMap(
    sessionId: string,
    mapId: string,
    map: MapDocument,
  ): Promise<{ seq: number; map_hash: string }> {
    return decode(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/maps`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ map_id: mapId, map }),
      }),
    );
  }

  async fetchMap(mapHash: string): Promise<MapDocument> {
    return decode(await fetch(`${this.baseUrl}/maps/${mapHash}`));
  }

  async fetchState(sessionId: string, since = 0): Promise<StateDoc> {
    return decode(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/state?since=${since}`),
    );
  }

  async fetchTally(sessionId: string): Promise<TallyDoc> {
    return decode(await fetch(`${this.baseUrl}/sessions/${sessionId}/tally`));
  }

  async postEvent(sessionId: string, event: EventRequest): Promise<EventAck> {
    return decode(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/events`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(event),
      }),
    );
  }

  /** Open the push stream; events arrive in seq order, at least once. */
  streamEvents(
    sessionId: string,
    since: number,
    onEvent: (event: SessionEventDoc) => void,
    onClose?: () => void,
  ): StreamHandle {
    const wsBase = this.baseUrl.replace(/^http/, "ws");
    const socket = this.socketFactory(
      `${wsBase}/sessions/${sessionId}/stream?since=${since}`,
    );
    socket.onmessage = (message) => {
      onEvent(JSON.parse(String(message.data)) as SessionEventDoc);
    };
    socket.onclose = () => onClose?.();
    socket.onerror = () => {
      /* surfaced via onclose */
    };
    return { close: () => socket.close() };
  }
}
