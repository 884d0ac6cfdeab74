/** Page wiring: join or create a session, pick an attached map, place and
 * manage stickers, vote, and mirror everyone else's actions live.
 *
 * Configuration comes from query parameters:
 *   ?base=http://localhost:8400&session=<id>&author=<name>
 */

import { ApiError, SessionApi, type StreamHandle } from "./api.js";
import { BoardViewModel } from "./model.js";
import { BoardRenderer } from "./render.js";
import type { MapDocument, StickerKind } from "./types.js";

type Tool = "select" | "requirement" | "solution";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

class BoardPage {
  private api: SessionApi;
  private model!: BoardViewModel;
  private renderer!: BoardRenderer;
  private stream: StreamHandle | null = null;
  private tool: Tool = "select";
  private activeMapId = "";
  private maps = new Map<string, MapDocument>();
  private toastBox: HTMLElement;
  private mapTabs: HTMLElement;
  private tallyBox: HTMLElement;

  constructor(
    private root: HTMLElement,
    baseUrl: string,
    private author: string,
  ) {
    this.api = new SessionApi(baseUrl);
    const bar = el("div", "toolbar");
    this.mapTabs = el("span", "map-tabs");
    bar.appendChild(this.mapTabs);
    for (const tool of ["select", "requirement", "solution"] as Tool[]) {
      const button = el("button", `tool tool-${tool}`, tool);
      button.addEventListener("click", () => {
        this.tool = tool;
        bar.querySelectorAll(".tool").forEach((b) => b.classList.remove("active"));
        button.classList.add("active");
      });
      bar.appendChild(button);
    }
    const vote = el("button", "tool tool-vote", "vote for this map");
    vote.addEventListener("click", () => void this.castVote());
    bar.appendChild(vote);
    this.tallyBox = el("span", "tally");
    bar.appendChild(this.tallyBox);
    this.toastBox = el("div", "toasts");
    const canvasHost = el("div", "canvas-host");
    this.root.appendChild(bar);
    this.root.appendChild(canvasHost);
    this.root.appendChild(this.toastBox);
    this.renderer = new BoardRenderer(canvasHost, {
      onBackgroundClick: (x, y) => void this.placeAt(x, y),
      onStickerClick: (id) => void this.stickerMenu(id),
    });
  }

  async join(sessionId: string): Promise<void> {
    this.model = new BoardViewModel(sessionId, this.author);
    const state = await this.api.fetchState(sessionId);
    this.model.loadSnapshot(state);
    for (const [mapId, hash] of Object.entries(state.maps)) {
      this.maps.set(mapId, await this.api.fetchMap(hash));
    }
    const first = Object.keys(state.maps).sort()[0];
    if (first) this.selectMap(first);
    this.stream = this.api.streamEvents(
      sessionId,
      this.model.lastAppliedSeq,
      (event) => {
        this.model.applyServerEvent(event);
        if (event.type === "attach_map") {
          void this.loadNewMap(event.map_id as string, event.map_hash as string);
        }
        this.redraw();
      },
      () => this.toast("stream closed; reload to reconnect"),
    );
    this.redraw();
  }

  private async loadNewMap(mapId: string, hash: string): Promise<void> {
    this.maps.set(mapId, await this.api.fetchMap(hash));
    if (!this.activeMapId) this.selectMap(mapId);
    this.redraw();
  }

  private selectMap(mapId: string): void {
    this.activeMapId = mapId;
    const doc = this.maps.get(mapId);
    if (doc) this.renderer.renderMap(doc);
    this.redraw();
  }

  private redraw(): void {
    this.mapTabs.textContent = "";
    for (const mapId of [...this.maps.keys()].sort()) {
      const tab = el("button", "map-tab", mapId);
      if (mapId === this.activeMapId) tab.classList.add("active");
      tab.addEventListener("click", () => this.selectMap(mapId));
      this.mapTabs.appendChild(tab);
    }
    this.renderer.renderStickers(this.model.stickers(this.activeMapId));
    void this.refreshTally();
  }

  private async refreshTally(): Promise<void> {
    try {
      const tally = await this.api.fetchTally(this.model.sessionId);
      const entry = tally.maps[this.activeMapId];
      this.tallyBox.textContent = entry
        ? `${entry.requirements} requirements / ${entry.solutions} solutions / ${entry.preference_votes} votes`
        : "";
    } catch {
      /* tally is cosmetic; ignore transient failures */
    }
  }

  private async placeAt(x: number, y: number): Promise<void> {
    if (this.tool === "select" || !this.activeMapId) return;
    const kind = this.tool as StickerKind;
    const text = window.prompt(`${kind} text:`) ?? "";
    if (!text.trim()) return;
    let answers: string | undefined;
    if (kind === "solution") {
      const target = window.prompt("answers requirement id (blank for none):") ?? "";
      answers = target.trim() || undefined;
    }
    const stickerId = this.model.stageSticker(this.activeMapId, kind, text, [x, y], answers);
    this.redraw();
    try {
      await this.api.postEvent(this.model.sessionId, {
        type: "place_sticker",
        sticker_id: stickerId,
        map_id: this.activeMapId,
        kind,
        text,
        position: [x, y],
        author: this.author,
        ...(answers ? { answers } : {}),
      });
    } catch (error) {
      this.model.dropPending(stickerId);
      this.redraw();
      this.toast(
        error instanceof ApiError
          ? `rejected: ${error.message}`
          : "network error; sticker rolled back",
      );
    }
  }

  private async stickerMenu(stickerId: string): Promise<void> {
    if (this.tool !== "select") return;
    const sticker = this.model
      .stickers(this.activeMapId)
      .find((s) => s.sticker_id === stickerId);
    if (!sticker || sticker.pending) return;
    if (sticker.author !== this.author) {
      this.toast(`sticker by ${sticker.author}; only the author may change it`);
      return;
    }
    const action = window.prompt("edit text, or type 'delete':", sticker.text) ?? "";
    if (!action) return;
    try {
      if (action.trim().toLowerCase() === "delete") {
        await this.api.postEvent(this.model.sessionId, {
          type: "delete_sticker",
          sticker_id: stickerId,
          author: this.author,
        });
      } else {
        await this.api.postEvent(this.model.sessionId, {
          type: "edit_sticker",
          sticker_id: stickerId,
          author: this.author,
          text: action,
          base_seq: this.model.lastAppliedSeq,
        });
      }
    } catch (error) {
      this.toast(error instanceof ApiError ? `rejected: ${error.message}` : "network error");
    }
  }

  private async castVote(): Promise<void> {
    if (!this.activeMapId) return;
    try {
      await this.api.postEvent(this.model.sessionId, {
        type: "cast_preference",
        participant: this.author,
        map_id: this.activeMapId,
      });
      this.toast(`vote recorded for map ${this.activeMapId}`);
    } catch (error) {
      this.toast(error instanceof ApiError ? `rejected: ${error.message}` : "network error");
    }
  }

  private toast(message: string): void {
    const note = el("div", "toast", message);
    this.toastBox.appendChild(note);
    setTimeout(() => note.remove(), 4000);
  }
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("base") ?? "http://localhost:8400";
  const author = params.get("author") ?? `guest-${Math.random().toString(36).slice(2, 6)}`;
  const root = document.getElementById("board-root");
  if (!root) throw new Error("missing #board-root");
  const page = new BoardPage(root, base, author);
  const requested = params.get("session");
  const api = new SessionApi(base);
  const sessionId = requested ?? (await api.createSession(undefined, "ad-hoc board"));
  await page.join(sessionId);
  if (!requested) {
    const here = new URL(window.location.href);
    here.searchParams.set("session", sessionId);
    window.history.replaceState(null, "", here.toString());
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  void boot().catch((error) => {
    const root = document.getElementById("board-root");
    if (root) {
      const panel = el("div", "error-panel", `cannot start board: ${error}`);
      root.appendChild(panel);
    }
  });
}
