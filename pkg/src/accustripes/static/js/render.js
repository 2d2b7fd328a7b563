/** Canvas painting of scenes: immediate-mode redraw from SceneModel JSON.
 *
 * Painting goes through a minimal context interface so the logic is
 * testable without a browser canvas. Geometry mirrors the server-side
 * renderer: stripes top-to-bottom, one shared axis underneath.
 */
import { dataToPx } from "./state.js";
export const DEFAULT_LAYOUT = {
    left: 70,
    stripeHeight: 14,
    gap: 2,
    axisBand: 28,
};
export const CHROME = "#cccccc";
export const HIGHLIGHT = "#ff8c00";
export function sceneHeight(scene, layout) {
    const n = scene.stripes.length;
    return n * (layout.stripeHeight + layout.gap) - layout.gap + layout.axisBand;
}
export function stripeTop(index, layout) {
    return index * (layout.stripeHeight + layout.gap);
}
function paintStripe(ctx, stripe, top, scene, layout, selected) {
    for (const r of stripe.rects) {
        const x0 = dataToPx(scene.axis, layout, r.x0);
        const x1 = dataToPx(scene.axis, layout, r.x1);
        const h = r.h * layout.stripeHeight;
        ctx.fillStyle = r.color;
        ctx.fillRect(x0, top + layout.stripeHeight - h, x1 - x0, h);
    }
    if (stripe.curve && stripe.curve.length > 1) {
        ctx.strokeStyle = "#ffffff";
        ctx.lineWidth = 1;
        ctx.beginPath();
        stripe.curve.forEach((p, i) => {
            const x = dataToPx(scene.axis, layout, p.x);
            const y = top + (1 - p.y) * layout.stripeHeight;
            if (i === 0) {
                ctx.moveTo(x, y);
            }
            else {
                ctx.lineTo(x, y);
            }
        });
        ctx.stroke();
    }
    ctx.fillStyle = selected ? HIGHLIGHT : CHROME;
    ctx.textAlign = "right";
    ctx.fillText(stripe.label, layout.left - 6, top + layout.stripeHeight / 2 + 3);
    if (selected) {
        ctx.strokeStyle = HIGHLIGHT;
        ctx.lineWidth = 1;
        ctx.strokeRect(layout.left, top, layout.width, layout.stripeHeight);
    }
}
export function paintScene(ctx, scene, state, layout) {
    ctx.clearRect(0, 0, layout.left + layout.width + 20, sceneHeight(scene, layout) + 4);
    ctx.font = "10px sans-serif";
    const selected = new Set(state.selectedRows);
    scene.stripes.forEach((stripe, i) => {
        paintStripe(ctx, stripe, stripeTop(i, layout), scene, layout, selected.has(i));
    });
    const axisY = scene.stripes.length * (layout.stripeHeight + layout.gap)
        - layout.gap + 6;
    ctx.strokeStyle = CHROME;
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(layout.left, axisY);
    ctx.lineTo(layout.left + layout.width, axisY);
    ctx.stroke();
    ctx.fillStyle = CHROME;
    ctx.textAlign = "center";
    for (const tick of scene.axis.ticks) {
        const x = dataToPx(scene.axis, layout, tick.x);
        ctx.beginPath();
        ctx.moveTo(x, axisY);
        ctx.lineTo(x, axisY + 4);
        ctx.stroke();
        ctx.fillText(tick.label, x, axisY + 14);
    }
}
/** Bin under a pixel position, for tooltips; null when over no rect. */
export function hitTest(scene, layout, px, py) {
    const rowPitch = layout.stripeHeight + layout.gap;
    const row = Math.floor(py / rowPitch);
    if (row < 0 || row >= scene.stripes.length) {
        return null;
    }
    if (py - row * rowPitch > layout.stripeHeight) {
        return null; // inside the gap
    }
    const stripe = scene.stripes[row];
    for (let bin = 0; bin < stripe.rects.length; bin++) {
        const r = stripe.rects[bin];
        const x0 = dataToPx(scene.axis, layout, r.x0);
        const x1 = dataToPx(scene.axis, layout, r.x1);
        if (px >= x0 && px <= x1) {
            return { row, bin, rect: r, label: stripe.label };
        }
    }
    return null;
}
