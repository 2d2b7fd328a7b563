/** Service client with last-write-wins supersession.
 *
 * Exactly one stripes request is issued per state change; if a newer
 * state is submitted while an older request is in flight, the older
 * response is discarded when it arrives, so paints never interleave.
 */
import { stripesUrl } from "./state.js";
export class ServiceClient {
    constructor(fetcher = (url, init) => fetch(url, init), base = "") {
        this.fetcher = fetcher;
        this.base = base;
        this.requestCount = 0;
        this.lastUrl = null;
        this.sequence = 0;
    }
    async loadDataset(body) {
        const resp = await this.fetcher(`${this.base}/datasets`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
        if (!resp.ok) {
            throw new Error(`load failed (${resp.status}): ${await resp.text()}`);
        }
        return (await resp.json());
    }
    /** Fetch the scene for a state; resolves to null when a newer request
     * superseded this one while it was in flight. */
    async fetchScene(state) {
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
        const scene = (await resp.json());
        return ticket === this.sequence ? scene : null;
    }
    async fetchRowDetail(url) {
        const resp = await this.fetcher(this.base + url);
        if (!resp.ok) {
            throw new Error(`detail failed (${resp.status}): ${await resp.text()}`);
        }
        return (await resp.json());
    }
}
