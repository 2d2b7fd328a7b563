/** Pure view-state transitions and the request URL they map to.
 *
 * The client never bins or colors anything itself: every edge, count and
 * color in a painted view originates from a service response, and the
 * view is a pure function of (ViewState, last scene). State changes are
 * therefore the only way to change what is displayed.
 */
export function initialState(datasetId) {
    return {
        datasetId,
        method: "uniform",
        composition: "colorOnly",
        colorMode: "linear",
        normalization: "global",
        zoomRange: null,
        selectedRows: [],
    };
}
/** Apply one control mutation, returning a fresh state. */
export function applyControlChange(state, change) {
    if ("toggleRow" in change) {
        const rows = state.selectedRows.includes(change.toggleRow)
            ? state.selectedRows.filter((r) => r !== change.toggleRow)
            : [...state.selectedRows, change.toggleRow].sort((a, b) => a - b);
        return { ...state, selectedRows: rows };
    }
    return { ...state, ...change };
}
/** Deterministic stripes-request URL for a state (fixed parameter order,
 * so equal states always produce byte-equal requests). */
export function stripesUrl(state) {
    const params = new URLSearchParams();
    params.set("method", state.method);
    params.set("composition", state.composition);
    params.set("mode", state.colorMode);
    params.set("normalization", state.normalization);
    if (state.zoomRange) {
        params.set("lo", String(state.zoomRange[0]));
        params.set("hi", String(state.zoomRange[1]));
    }
    return `/datasets/${state.datasetId}/stripes?${params.toString()}`;
}
export function rowDetailUrl(state, row) {
    const params = new URLSearchParams();
    params.set("method", state.method);
    if (state.zoomRange) {
        params.set("lo", String(state.zoomRange[0]));
        params.set("hi", String(state.zoomRange[1]));
    }
    return `/datasets/${state.datasetId}/rows/${row}?${params.toString()}`;
}
export function pxToData(axis, geom, px) {
    return axis.min + ((px - geom.left) / geom.width) * (axis.max - axis.min);
}
export function dataToPx(axis, geom, x) {
    return geom.left + ((x - axis.min) / (axis.max - axis.min)) * geom.width;
}
/** Turn a pixel brush on the current axis into a zoomed state.
 * Zero-width brushes are ignored (returns null). The resulting range is
 * clamped to the dataset's global limits. */
export function brushZoom(state, axis, geom, px0, px1, globalLimits) {
    const a = Math.min(px0, px1);
    const b = Math.max(px0, px1);
    if (b - a <= 0) {
        return null;
    }
    const lo = Math.max(pxToData(axis, geom, a), globalLimits[0]);
    const hi = Math.min(pxToData(axis, geom, b), globalLimits[1]);
    if (!(lo < hi)) {
        return null;
    }
    return applyControlChange(state, { zoomRange: [lo, hi] });
}
export function resetZoom(state) {
    return applyControlChange(state, { zoomRange: null });
}
