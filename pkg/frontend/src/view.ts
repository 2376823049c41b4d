/** Header formatting and canvas painting, both pure.
 *
 * Every number shown comes verbatim from the latest snapshot. Painting goes
 * through a tiny context interface so tests can record the draw calls and a
 * missing 2d context (headless runs) just skips the picture.
 */

import type { Snapshot } from "./api.js";
import { Board, Transform, boundaryXY, worldToScreen } from "./geometry.js";

export interface HeaderTexts {
  greedy: string;
  opt: string;
  ratio: string;
}

/** Short decimal rendering: up to four fraction digits, trailing zeros cut,
 * null (an infinite ratio) and absent values shown as a dash.
 */
export function formatAmount(value: number | null | undefined): string {
  if (value === null || value === undefined) return "—";
  const text = value.toFixed(4);
  return text.includes(".") ? text.replace(/\.?0+$/, "") : text;
}

export function headerTexts(snapshot: Snapshot | null): HeaderTexts {
  if (snapshot === null) {
    return { greedy: "—", opt: "—", ratio: "—" };
  }
  return {
    greedy: formatAmount(snapshot.greedy_total),
    opt: formatAmount(snapshot.opt_total),
    // an empty board has nothing to compare yet
    ratio: snapshot.placed.length > 0 ? formatAmount(snapshot.ratio) : "—",
  };
}

/** The slice of CanvasRenderingContext2D the painter actually uses. */
export interface Paint2D {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  textBaseline: CanvasTextBaseline;
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  setLineDash(segments: number[]): void;
  fillText(text: string, x: number, y: number): void;
}

const GREEDY_STYLE = "#1a73e8";
const OPT_STYLE = "#188038";
const DOTTED: number[] = [4, 3];

function segment(ctx: Paint2D, tf: Transform, a: [number, number], b: [number, number]): void {
  const [ax, ay] = worldToScreen(tf, a[0], a[1]);
  const [bx, by] = worldToScreen(tf, b[0], b[1]);
  ctx.beginPath();
  ctx.moveTo(ax, ay);
  ctx.lineTo(bx, by);
  ctx.stroke();
}

function dot(ctx: Paint2D, tf: Transform, p: [number, number], r: number, style: string): void {
  const [x, y] = worldToScreen(tf, p[0], p[1]);
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fillStyle = style;
  ctx.fill();
}

export function paintBoard(
  ctx: Paint2D,
  snapshot: Snapshot,
  board: Board,
  tf: Transform,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.setLineDash([]);
  ctx.strokeStyle = "#444";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  if (board.kind === "circle") {
    const [cx, cy] = worldToScreen(tf, 0, 0);
    ctx.arc(cx, cy, tf.scale * board.radius, 0, 2 * Math.PI);
  } else {
    const first = board.edges[0]!;
    const [x0, y0] = worldToScreen(tf, first.ax, first.ay);
    ctx.moveTo(x0, y0);
    for (const edge of board.edges) {
      const [x, y] = worldToScreen(tf, edge.bx, edge.by);
      ctx.lineTo(x, y);
    }
    ctx.closePath();
  }
  ctx.stroke();

  const customers = snapshot.placed.map((s) => boundaryXY(board, s));
  const facilityXY = new Map<number, [number, number]>();
  for (const f of snapshot.facilities) facilityXY.set(f.id, [f.x, f.y]);

  // current optimum dotted, greedy solid, per the header legend
  ctx.lineWidth = 1.25;
  ctx.setLineDash(DOTTED);
  ctx.strokeStyle = OPT_STYLE;
  snapshot.opt_assignment.forEach((fid, customer) => {
    segment(ctx, tf, customers[customer]!, facilityXY.get(fid)!);
  });
  ctx.setLineDash([]);
  ctx.strokeStyle = GREEDY_STYLE;
  for (const step of snapshot.steps) {
    segment(ctx, tf, customers[step.customer]!, facilityXY.get(step.facility)!);
  }

  ctx.font = "12px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const f of snapshot.facilities) {
    dot(ctx, tf, [f.x, f.y], 7, "#fff");
    const [x, y] = worldToScreen(tf, f.x, f.y);
    ctx.beginPath();
    ctx.arc(x, y, 7, 0, 2 * Math.PI);
    ctx.strokeStyle = "#222";
    ctx.stroke();
    ctx.fillStyle = "#222";
    ctx.fillText(String(f.residual), x, y);
  }
  for (const p of customers) {
    dot(ctx, tf, p, 3.5, GREEDY_STYLE);
  }
}
