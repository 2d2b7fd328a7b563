/** Service client with last-write-wins supersession.
 *
 * Exactly one stripes request is issued per state change; if a newer
 * state is submitted while an older request is in flight, the older
 * response is discarded when it arrives, so paints never interleave.
 */

import { stripesUrl } from "./state.js";
import { DatasetMeta, RowDetail, SceneJson, ViewState } from "./types.js";

export type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  requestCount = 0;
  lastUrl: string | null = null;
  private sequence = 0;

  constructor(
    private readonly fetcher: Fetcher = (url, init) => fetch(url, init),
    private readonly base: string = "",
  ) {}

  async loadDataset(body: {
    property: string;
    manifest?: string;
    sources?: { label: string; csv: string }[];
  }): Promise<DatasetMeta> {
    const resp = await this.fetcher(`${this.base}/datasets`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      throw new Error(`load failed (${resp.status}): ${await resp.text()}`);
    }
    return (await resp.json()) as DatasetMeta;
  }

  /** Fetch the scene for a state; resolves to null when a newer request
   * superseded this one while it was in flight. */
  async fetchScene(state: ViewState): Promise<SceneJson | null> {
    const ticket = ++this.sequence;
    const url = this.base + stripesUrl(state);
    this.requestCount += 1;
    this.lastUrl = url;
    const resp = await this.fetcher(url);
    if (ticket !== this.sequence) {
      return null; // stale: a newer state took over
    }
    if (!resp.ok) {
      throw new Error(`stripes failed (${resp.status}): ${await resp.text()}`);
    }
    const scene = (await resp.json()) as SceneJson;
    return ticket === this.sequence ? scene : null;
  }

  async fetchRowDetail(url: string): Promise<RowDetail> {
    const resp = await this.fetcher(this.base + url);
    if (!resp.ok) {
      throw new Error(`detail failed (${resp.status}): ${await resp.text()}`);
    }
    return (await resp.json()) as RowDetail;
  }
}
