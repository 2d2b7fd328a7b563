/** Scripted state-sequence replay against a fixture service.
 *
 * The fixture serves deterministic bytes per URL, so equal requests get
 * byte-identical bodies — mirroring the real service's determinism
 * contract. The script toggles binning, toggles composition, brush-zooms
 * and resets, asserting exactly one request per state change, a known
 * final scene, and a byte-identical return to the initial scene after
 * zoom+reset.
 */

import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { applyControlChange, brushZoom, initialState,
         resetZoom } from "../src/state.js";
import { SceneJson, ViewState } from "../src/types.js";

function fixtureScene(url: string): SceneJson {
  const params = new URL(url, "http://fixture").searchParams;
  const method = params.get("method") ?? "uniform";
  const composition = params.get("composition") ?? "colorOnly";
  const lo = Number(params.get("lo") ?? 0);
  const hi = Number(params.get("hi") ?? 100);
  // two stripes whose geometry depends only on the request parameters
  const bins = method === "uniform" ? 4 : 3;
  const stripes = [0, 1].map((row) => {
    const rects = Array.from({ length: bins }, (_, b) => ({
      x0: lo + ((hi - lo) * b) / bins,
      x1: lo + ((hi - lo) * (b + 1)) / bins,
      h: composition === "filledCurve" ? 0.5 : 1.0,
      color: b === 1 ? "#000000" : "#31688e",
    }));
    const stripe: SceneJson["stripes"][number] = {
      label: `tile_00${row}`,
      composition,
      rects,
    };
    if (composition === "overlay") {
      stripe.curve = [{ x: lo, y: 0.2 }, { x: hi, y: 1.0 }];
    }
    return stripe;
  });
  return {
    axis: { min: lo, max: hi, ticks: [{ x: lo, label: String(lo) }] },
    stripes,
  };
}

class FixtureService {
  log: string[] = [];
  private bodies = new Map<string, string>();

  body(url: string): string {
    if (!this.bodies.has(url)) {
      this.bodies.set(url, JSON.stringify(fixtureScene(url)));
    }
    return this.bodies.get(url)!;
  }

  fetcher = async (url: string): Promise<Response> => {
    this.log.push(url);
    return new Response(this.body(url), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  };
}

const AXIS = { min: 0, max: 100 };
const GEOM = { left: 0, width: 1000 };
const LIMITS: [number, number] = [0, 100];

describe("scripted replay", () => {
  it("replays method/composition/zoom/reset with one request per change "
     + "and lands on the known final scene", async () => {
    const service = new FixtureService();
    const client = new ServiceClient(service.fetcher);

    let state: ViewState = initialState("ds-1");
    await client.fetchScene(state);
    expect(client.requestCount).toBe(1);

    state = applyControlChange(state, { method: "bb" });
    const afterMethod = await client.fetchScene(state);
    expect(client.requestCount).toBe(2);
    expect(afterMethod!.stripes[0].rects).toHaveLength(3);

    state = applyControlChange(state, { composition: "overlay" });
    const afterComposition = await client.fetchScene(state);
    expect(client.requestCount).toBe(3);
    expect(afterComposition!.stripes[0].curve).toBeDefined();

    state = brushZoom(state, AXIS, GEOM, 0, 500, LIMITS)!;
    const zoomed = await client.fetchScene(state);
    expect(client.requestCount).toBe(4);
    expect(zoomed!.axis.max).toBeLessThanOrEqual(50.1);

    state = resetZoom(state);
    const finalScene = await client.fetchScene(state);
    expect(client.requestCount).toBe(5);

    // known final scene: bb + overlay over the full range
    expect(finalScene).toEqual(fixtureScene(
      "/datasets/ds-1/stripes?method=bb&composition=overlay" +
      "&mode=linear&normalization=global"));
    expect(finalScene!.stripes).toHaveLength(2);
    expect(finalScene!.axis.min).toBe(0);
    expect(finalScene!.axis.max).toBe(100);
  });

  it("zoom then reset returns the byte-identical initial scene", async () => {
    const service = new FixtureService();
    const client = new ServiceClient(service.fetcher);

    let state: ViewState = initialState("ds-1");
    await client.fetchScene(state);
    const initialUrl = service.log[0];
    const initialBody = service.body(initialUrl);

    state = brushZoom(state, AXIS, GEOM, 250, 750, LIMITS)!;
    await client.fetchScene(state);
    expect(service.log[1]).not.toBe(initialUrl);

    state = resetZoom(state);
    await client.fetchScene(state);
    const resetUrl = service.log[2];
    expect(resetUrl).toBe(initialUrl);
    expect(service.body(resetUrl)).toBe(initialBody);
    expect(client.requestCount).toBe(3);
  });

  it("discards superseded responses (last write wins)", async () => {
    let releaseFirst: (r: Response) => void = () => {};
    const slowBody = JSON.stringify(fixtureScene(
      "/datasets/ds-1/stripes?method=uniform"));
    const fastBody = JSON.stringify(fixtureScene(
      "/datasets/ds-1/stripes?method=bb"));
    let call = 0;
    const client = new ServiceClient(async () => {
      call += 1;
      if (call === 1) {
        return new Promise<Response>((resolve) => {
          releaseFirst = resolve;
        });
      }
      return new Response(fastBody, { status: 200 });
    });

    const state = initialState("ds-1");
    const first = client.fetchScene(state);
    const second = client.fetchScene(
      applyControlChange(state, { method: "bb" }));
    releaseFirst(new Response(slowBody, { status: 200 }));

    expect(await first).toBeNull(); // stale response discarded
    expect((await second)!.stripes[0].rects).toHaveLength(3);
    expect(client.requestCount).toBe(2);
  });
});
