/** Click-to-boundary snapping and the canvas transform.
 *
 * This is the only arithmetic the client owns. A board is built once per
 * snapshot from the server's render block, so every arc-length value here
 * agrees with the server's parametrization: edge endpoints carry the exact
 * facility s values from the snapshot, never re-derived ones.
 */
/** Snap results live on a per-edge grid of 2^20 steps. Reconstructing a
 * snapped point and snapping it again moves the raw parameter by ~1e-12,
 * about six orders of magnitude below half a grid step, so it re-rounds to
 * the same cell: snapping is idempotent, bit for bit. Half a million cells
 * per edge is also far below pixel resolution.
 */
const GRID = 1 << 20;
export function buildBoard(render, cycle, facilities) {
    if (render.kind === "circle") {
        return { kind: "circle", radius: render.radius, cycle };
    }
    const corners = render.corners;
    if (corners.length !== facilities.length) {
        throw new Error(`render has ${corners.length} corners but ${facilities.length} facilities`);
    }
    const edges = [];
    for (let i = 0; i < corners.length; i += 1) {
        const a = corners[i];
        const b = corners[(i + 1) % corners.length];
        const next = i + 1 < corners.length ? facilities[i + 1].s : cycle;
        edges.push({ ax: a[0], ay: a[1], bx: b[0], by: b[1], s0: facilities[i].s, s1: next });
    }
    return { kind: "polygon", edges, cycle };
}
/** World coordinates of the boundary point at arc length s. */
export function boundaryXY(board, s) {
    if (board.kind === "circle") {
        const angle = (2 * Math.PI * s) / board.cycle;
        return [board.radius * Math.cos(angle), board.radius * Math.sin(angle)];
    }
    for (const edge of board.edges) {
        if (s <= edge.s1) {
            const u = (s - edge.s0) / (edge.s1 - edge.s0);
            return [edge.ax + u * (edge.bx - edge.ax), edge.ay + u * (edge.by - edge.ay)];
        }
    }
    const last = board.edges[board.edges.length - 1];
    return [last.bx, last.by];
}
/** Arc length of the boundary point nearest to a world-coordinate click.
 * Always in [0, cycle); clicks exactly on a polygon corner return that
 * corner's s verbatim.
 */
export function snapToBoundary(board, x, y) {
    if (board.kind === "circle") {
        let turn = Math.atan2(y, x) / (2 * Math.PI); // the center itself snaps to 0
        if (turn < 0)
            turn += 1;
        let j = Math.round(turn * GRID);
        if (j >= GRID)
            j = 0;
        return (j / GRID) * board.cycle;
    }
    let best = board.edges[0];
    let bestT = 0;
    let bestD = Infinity;
    for (const edge of board.edges) {
        const abx = edge.bx - edge.ax;
        const aby = edge.by - edge.ay;
        const t = clamp(((x - edge.ax) * abx + (y - edge.ay) * aby) / (abx * abx + aby * aby));
        const dx = x - (edge.ax + t * abx);
        const dy = y - (edge.ay + t * aby);
        const d = dx * dx + dy * dy;
        if (d < bestD) {
            // strict: ties go to the earliest edge, so corners resolve stably
            best = edge;
            bestT = t;
            bestD = d;
        }
    }
    const j = Math.round(bestT * GRID);
    if (j <= 0)
        return best.s0;
    if (j >= GRID)
        return best.s1 >= board.cycle ? 0 : best.s1;
    return best.s0 + (j / GRID) * (best.s1 - best.s0);
}
function clamp(t) {
    return t < 0 ? 0 : t > 1 ? 1 : t;
}
export function fitTransform(board, width, height, margin = 40) {
    let minX;
    let maxX;
    let minY;
    let maxY;
    if (board.kind === "circle") {
        minX = minY = -board.radius;
        maxX = maxY = board.radius;
    }
    else {
        minX = Math.min(...board.edges.map((e) => e.ax));
        maxX = Math.max(...board.edges.map((e) => e.ax));
        minY = Math.min(...board.edges.map((e) => e.ay));
        maxY = Math.max(...board.edges.map((e) => e.ay));
    }
    const spanX = Math.max(maxX - minX, 1e-9);
    const spanY = Math.max(maxY - minY, 1e-9);
    const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
    return {
        scale,
        ox: width / 2 - scale * ((minX + maxX) / 2),
        oy: height / 2 + scale * ((minY + maxY) / 2),
    };
}
export function worldToScreen(tf, x, y) {
    return [tf.ox + tf.scale * x, tf.oy - tf.scale * y];
}
export function screenToWorld(tf, sx, sy) {
    return [(sx - tf.ox) / tf.scale, (tf.oy - sy) / tf.scale];
}
/** Pixel click to arc length, the full pipeline behind a board click. */
export function clickToArc(board, tf, sx, sy) {
    const [x, y] = screenToWorld(tf, sx, sy);
    return snapToBoundary(board, x, y);
}
