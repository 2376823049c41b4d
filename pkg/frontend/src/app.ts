/** Wires the playground page to the session service.
 *
 * Mutations are queued so at most one request is in flight; controls stay
 * disabled until the fresh snapshot lands. All state shown on screen is the
 * last snapshot verbatim, the client only converts clicks to arc lengths.
 */

import { Api, ApiError, Snapshot } from "./api.js";
import { Board, Transform, buildBoard, clickToArc, fitTransform } from "./geometry.js";
import { Paint2D, headerTexts, paintBoard } from "./view.js";

interface Elements {
  preset: HTMLSelectElement;
  newSession: HTMLButtonElement;
  replay: HTMLButtonElement;
  undo: HTMLButtonElement;
  reset: HTMLButtonElement;
  greedy: HTMLElement;
  opt: HTMLElement;
  ratio: HTMLElement;
  banner: HTMLElement;
  board: HTMLCanvasElement;
}

function need<T extends Element>(doc: Document, id: string): T {
  const el = doc.getElementById(id);
  if (el === null) throw new Error(`page is missing #${id}`);
  return el as unknown as T;
}

export class App {
  snapshot: Snapshot | null = null;
  board: Board | null = null;
  transform: Transform | null = null;

  private readonly el: Elements;
  private chain: Promise<void> = Promise.resolve();
  private pending = 0;
  private ctx2d: Paint2D | null | undefined;

  constructor(
    private readonly doc: Document,
    private readonly api: Api,
  ) {
    this.el = {
      preset: need(doc, "preset"),
      newSession: need(doc, "new-session"),
      replay: need(doc, "replay"),
      undo: need(doc, "undo"),
      reset: need(doc, "reset"),
      greedy: need(doc, "greedy-total"),
      opt: need(doc, "opt-total"),
      ratio: need(doc, "ratio"),
      banner: need(doc, "banner"),
      board: need(doc, "board"),
    };
    this.el.newSession.addEventListener("click", () => {
      void this.start(this.el.preset.value, false);
    });
    this.el.replay.addEventListener("click", () => {
      void this.start(this.el.preset.value, true);
    });
    this.el.undo.addEventListener("click", () => {
      void this.undoLast();
    });
    this.el.reset.addEventListener("click", () => {
      void this.resetBoard();
    });
    this.el.banner.addEventListener("click", () => {
      this.el.banner.hidden = true;
    });
    this.el.board.addEventListener("click", (ev) => {
      if (this.snapshot === null || this.board === null || this.transform === null) return;
      if (this.pending > 0) return; // input stays dead while a request runs
      const rect = this.el.board.getBoundingClientRect();
      const s = clickToArc(this.board, this.transform, ev.clientX - rect.left, ev.clientY - rect.top);
      void this.place(s);
    });
    this.refresh();
  }

  /** Loads the preset list; part of the same queue as everything else. */
  init(): Promise<void> {
    return this.enqueue(async () => {
      const cases = await this.api.cases();
      this.el.preset.textContent = "";
      for (const spec of cases) {
        const option = this.doc.createElement("option");
        option.value = spec;
        option.textContent = spec;
        this.el.preset.appendChild(option);
      }
    });
  }

  /** Resolves once every queued request has settled. */
  idle(): Promise<void> {
    return this.chain;
  }

  start(caseSpec: string, replay: boolean): Promise<void> {
    return this.enqueue(async () => {
      this.adopt(await this.api.createFromCase(caseSpec, replay));
    });
  }

  place(s: number): Promise<void> {
    return this.enqueue(async () => {
      if (this.snapshot === null) throw new ApiError(0, "no_session", "start a session first");
      this.adopt(await this.api.place(this.snapshot.id, s));
    });
  }

  undoLast(): Promise<void> {
    return this.enqueue(async () => {
      if (this.snapshot === null) throw new ApiError(0, "no_session", "start a session first");
      this.adopt(await this.api.undo(this.snapshot.id));
    });
  }

  resetBoard(): Promise<void> {
    return this.enqueue(async () => {
      if (this.snapshot === null) throw new ApiError(0, "no_session", "start a session first");
      this.adopt(await this.api.reset(this.snapshot.id));
    });
  }

  private enqueue(task: () => Promise<void>): Promise<void> {
    this.pending += 1;
    this.syncControls();
    const step = this.chain
      .then(task)
      .catch((err: unknown) => {
        this.showError(err);
      })
      .then(() => {
        this.pending -= 1;
        this.syncControls();
      });
    this.chain = step;
    return step;
  }

  private adopt(snapshot: Snapshot): void {
    this.snapshot = snapshot;
    this.board = buildBoard(snapshot.render, snapshot.cycle_length, snapshot.facilities);
    this.transform = fitTransform(this.board, this.el.board.width, this.el.board.height);
    this.el.banner.hidden = true;
    this.refresh();
  }

  private refresh(): void {
    const texts = headerTexts(this.snapshot);
    this.el.greedy.textContent = texts.greedy;
    this.el.opt.textContent = texts.opt;
    this.el.ratio.textContent = texts.ratio;
    if (this.snapshot === null || this.board === null || this.transform === null) return;
    const ctx = this.paint2d();
    if (ctx !== null) {
      paintBoard(ctx, this.snapshot, this.board, this.transform, this.el.board.width, this.el.board.height);
    }
  }

  private paint2d(): Paint2D | null {
    // headless documents have no 2d context; the header still works
    if (this.ctx2d === undefined) {
      try {
        this.ctx2d = this.el.board.getContext("2d") as unknown as Paint2D | null;
      } catch {
        this.ctx2d = null;
      }
    }
    return this.ctx2d;
  }

  private showError(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.el.banner.textContent = message;
    this.el.banner.hidden = false;
  }

  private syncControls(): void {
    const busy = this.pending > 0;
    this.el.newSession.disabled = busy;
    this.el.replay.disabled = busy;
    this.el.undo.disabled = busy;
    this.el.reset.disabled = busy;
    this.el.preset.disabled = busy;
  }
}

export function boot(doc: Document, api: Api = new Api("")): App {
  const app = new App(doc, api);
  void app.init();
  return app;
}
