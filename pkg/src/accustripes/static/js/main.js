/** DOM wiring for the explorer: controls, canvas brushing, detail pane.
 *
 * All data (edges, counts, colors, curves) comes from service responses;
 * this module only routes state changes to requests and paints what the
 * service returns.
 */
import { ServiceClient } from "./api.js";
import { DEFAULT_LAYOUT, hitTest, paintScene, sceneHeight } from "./render.js";
import { applyControlChange, brushZoom, initialState, resetZoom, rowDetailUrl, } from "./state.js";
const client = new ServiceClient();
let meta = null;
let state = null;
let scene = null;
let layout = null;
function el(id) {
    const node = document.getElementById(id);
    if (!node) {
        throw new Error(`missing element #${id}`);
    }
    return node;
}
function showError(message) {
    const banner = el("error-banner");
    banner.textContent = message ?? "";
    banner.style.display = message ? "block" : "none";
}
function canvasLayout() {
    const canvas = el("scene");
    return { ...DEFAULT_LAYOUT, width: canvas.width - DEFAULT_LAYOUT.left - 20 };
}
async function refresh(next) {
    state = next;
    try {
        const got = await client.fetchScene(next);
        if (got === null) {
            return; // superseded by a newer state
        }
        scene = got;
        showError(null);
        paint();
    }
    catch (err) {
        showError(`${err} — view kept; adjust controls to retry`);
    }
}
function paint() {
    if (!scene || !state) {
        return;
    }
    layout = canvasLayout();
    const canvas = el("scene");
    canvas.height = sceneHeight(scene, layout) + 4;
    const ctx = canvas.getContext("2d");
    if (ctx) {
        paintScene(ctx, scene, state, layout);
    }
}
async function showDetail(row) {
    if (!state || !meta) {
        return;
    }
    const detail = await client.fetchRowDetail(rowDetailUrl(state, row));
    const pane = el("detail");
    const s = detail.stats;
    el("detail-title").textContent =
        `${detail.label} — n=${s.n}` + (s.n
            ? `, min=${fmt(s.min)}, max=${fmt(s.max)}, ` +
                `mean=${fmt(s.mean)}, median=${fmt(s.median)}`
            : " (empty under current zoom)");
    pane.style.display = "block";
    const canvas = el("detail-chart");
    const ctx = canvas.getContext("2d");
    if (!ctx) {
        return;
    }
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const { edges, counts } = detail.histogram;
    const lo = edges[0];
    const hi = edges[edges.length - 1];
    const top = Math.max(...counts, 1);
    const w = canvas.width - 20;
    const stripeBand = 26;
    const h = canvas.height - 18 - stripeBand;
    // enlarged stripe for the selected row, taken from the current scene
    const current = scene?.stripes[row];
    if (current) {
        for (const r of current.rects) {
            const x0 = 10 + ((r.x0 - lo) / (hi - lo)) * w;
            const x1 = 10 + ((r.x1 - lo) / (hi - lo)) * w;
            ctx.fillStyle = r.color;
            ctx.fillRect(x0, 4 + (1 - r.h) * (stripeBand - 8), x1 - x0, r.h * (stripeBand - 8));
        }
    }
    ctx.fillStyle = "#46327e";
    counts.forEach((c, b) => {
        if (c === 0) {
            return;
        }
        const x0 = 10 + ((edges[b] - lo) / (hi - lo)) * w;
        const x1 = 10 + ((edges[b + 1] - lo) / (hi - lo)) * w;
        const bh = (c / top) * h;
        ctx.fillRect(x0, stripeBand + 10 + h - bh, Math.max(x1 - x0 - 1, 1), bh);
    });
    if (detail.curve) {
        const peak = Math.max(...detail.curve.ys, 1e-12);
        ctx.strokeStyle = "#ffffff";
        ctx.beginPath();
        detail.curve.xs.forEach((x, i) => {
            const pxX = 10 + ((x - lo) / (hi - lo)) * w;
            const pxY = stripeBand + 10 + h - (detail.curve.ys[i] / peak) * h;
            if (i === 0) {
                ctx.moveTo(pxX, pxY);
            }
            else {
                ctx.lineTo(pxX, pxY);
            }
        });
        ctx.stroke();
    }
}
function fmt(v) {
    return v === null ? "-" : Number(v.toPrecision(6)).toString();
}
function wireControls() {
    const bind = (id, apply) => {
        el(id).addEventListener("change", (ev) => {
            apply(ev.target.value);
        });
    };
    bind("method", (v) => {
        if (state)
            void refresh(applyControlChange(state, { method: v }));
    });
    bind("composition", (v) => {
        if (state)
            void refresh(applyControlChange(state, { composition: v }));
    });
    bind("color-mode", (v) => {
        if (state)
            void refresh(applyControlChange(state, { colorMode: v }));
    });
    bind("normalization", (v) => {
        if (state)
            void refresh(applyControlChange(state, { normalization: v }));
    });
    el("reset-zoom").addEventListener("click", () => {
        if (state)
            void refresh(resetZoom(state));
    });
    el("load").addEventListener("click", async () => {
        const manifest = el("manifest").value.trim();
        const property = el("property").value.trim() || "volume";
        if (!manifest) {
            showError("enter a manifest path (server-side)");
            return;
        }
        try {
            meta = await client.loadDataset({ property, manifest });
            el("dataset-info").textContent =
                `${meta.id}: ${meta.rowCount} rows of ${meta.property}, ` +
                    `range [${fmt(meta.globalMin)}, ${fmt(meta.globalMax)}]`;
            await refresh(initialState(meta.id));
        }
        catch (err) {
            showError(String(err));
        }
    });
}
function wireCanvas() {
    const canvas = el("scene");
    const tooltip = el("tooltip");
    let brushStart = null;
    canvas.addEventListener("mousedown", (ev) => {
        brushStart = ev.offsetX;
    });
    canvas.addEventListener("mouseup", (ev) => {
        if (brushStart === null || !state || !scene || !meta || !layout) {
            brushStart = null;
            return;
        }
        const zoomed = brushZoom(state, scene.axis, layout, brushStart, ev.offsetX, [meta.globalMin, meta.globalMax]);
        brushStart = null;
        if (zoomed) {
            void refresh(zoomed);
        }
    });
    canvas.addEventListener("mousemove", (ev) => {
        if (!scene || !layout) {
            return;
        }
        const hit = hitTest(scene, layout, ev.offsetX, ev.offsetY);
        if (hit) {
            tooltip.style.display = "block";
            tooltip.style.left = `${ev.pageX + 12}px`;
            tooltip.style.top = `${ev.pageY + 12}px`;
            // exact black is the empty-bin color, so count 0 is recoverable
            const empty = hit.rect.color === "#000000" ? " · count 0" : "";
            tooltip.innerHTML =
                `<span class="swatch" style="background:${hit.rect.color}"></span>` +
                    `${hit.label} · [${fmt(hit.rect.x0)}, ${fmt(hit.rect.x1)})${empty}`;
        }
        else {
            tooltip.style.display = "none";
        }
    });
    canvas.addEventListener("mouseleave", () => {
        tooltip.style.display = "none";
    });
    canvas.addEventListener("dblclick", (ev) => {
        if (!scene || !layout || !state) {
            return;
        }
        const hit = hitTest(scene, layout, ev.offsetX, ev.offsetY);
        if (hit) {
            state = applyControlChange(state, { toggleRow: hit.row });
            paint();
            void showDetail(hit.row);
        }
    });
}
document.addEventListener("DOMContentLoaded", () => {
    wireControls();
    wireCanvas();
});
