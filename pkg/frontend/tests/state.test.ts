import { describe, expect, it } from "vitest";

import {
  applyControlChange,
  brushZoom,
  dataToPx,
  initialState,
  pxToData,
  resetZoom,
  stripesUrl,
} from "../src/state.js";

const AXIS = { min: 0, max: 100 };
const GEOM = { left: 0, width: 1000 };
const LIMITS: [number, number] = [0, 100];

describe("stripesUrl", () => {
  it("echoes every control with fixed parameter order", () => {
    const s0 = initialState("ds-1");
    expect(stripesUrl(s0)).toBe(
      "/datasets/ds-1/stripes?method=uniform&composition=colorOnly" +
      "&mode=linear&normalization=global");
    const s1 = applyControlChange(s0, { method: "bb" });
    expect(stripesUrl(s1)).toBe(
      "/datasets/ds-1/stripes?method=bb&composition=colorOnly" +
      "&mode=linear&normalization=global");
  });

  it("includes the zoom range when set", () => {
    const s = applyControlChange(initialState("ds-1"),
                                 { zoomRange: [10, 20] });
    expect(stripesUrl(s)).toContain("lo=10");
    expect(stripesUrl(s)).toContain("hi=20");
  });

  it("equal states produce byte-equal URLs", () => {
    const a = applyControlChange(initialState("ds-2"), { method: "nb" });
    const b = applyControlChange(initialState("ds-2"), { method: "nb" });
    expect(stripesUrl(a)).toBe(stripesUrl(b));
  });
});

describe("applyControlChange", () => {
  it("changes exactly the named field", () => {
    const s0 = initialState("ds-1");
    const s1 = applyControlChange(s0, { composition: "overlay" });
    expect(s1.composition).toBe("overlay");
    expect(s1.method).toBe(s0.method);
    expect(s1.zoomRange).toBe(s0.zoomRange);
    expect(s0.composition).toBe("colorOnly"); // original untouched
  });

  it("toggles row selection", () => {
    const s0 = initialState("ds-1");
    const s1 = applyControlChange(s0, { toggleRow: 3 });
    const s2 = applyControlChange(s1, { toggleRow: 1 });
    const s3 = applyControlChange(s2, { toggleRow: 3 });
    expect(s1.selectedRows).toEqual([3]);
    expect(s2.selectedRows).toEqual([1, 3]);
    expect(s3.selectedRows).toEqual([1]);
  });
});

describe("brushZoom", () => {
  it("inverts the left-half brush to the lower half range", () => {
    const s = brushZoom(initialState("ds-1"), AXIS, GEOM, 0, 500, LIMITS);
    const pixelWidth = (AXIS.max - AXIS.min) / GEOM.width;
    expect(s).not.toBeNull();
    expect(Math.abs(s!.zoomRange![0] - 0)).toBeLessThanOrEqual(pixelWidth);
    expect(Math.abs(s!.zoomRange![1] - 50)).toBeLessThanOrEqual(pixelWidth);
  });

  it("maps a full-width brush to the global limits", () => {
    const s = brushZoom(initialState("ds-1"), AXIS, GEOM, 0, 1000, LIMITS);
    expect(s!.zoomRange).toEqual([0, 100]);
  });

  it("ignores zero-width brushes", () => {
    expect(brushZoom(initialState("ds-1"), AXIS, GEOM, 400, 400, LIMITS))
      .toBeNull();
  });

  it("swaps reversed pixel order", () => {
    const s = brushZoom(initialState("ds-1"), AXIS, GEOM, 800, 200, LIMITS);
    expect(s!.zoomRange![0]).toBeCloseTo(20, 6);
    expect(s!.zoomRange![1]).toBeCloseTo(80, 6);
  });

  it("round-trips with dataToPx", () => {
    for (const x of [0, 12.5, 50, 99.9]) {
      expect(pxToData(AXIS, GEOM, dataToPx(AXIS, GEOM, x))).toBeCloseTo(x, 9);
    }
  });

  it("reset restores the full range", () => {
    const zoomed = brushZoom(initialState("ds-1"), AXIS, GEOM, 100, 300,
                             LIMITS)!;
    expect(resetZoom(zoomed).zoomRange).toBeNull();
  });
});
