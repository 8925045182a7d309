/** Fake fetch replaying queued recorded responses, with call recording. */

import type { FetchLike } from "../src/api";

interface Scripted {
  status: number;
  body: unknown;
}

export interface RecordedCall {
  method: string;
  url: string;
  body?: unknown;
}

export class FakeFetch {
  readonly calls: RecordedCall[] = [];
  private readonly queues = new Map<string, Scripted[]>();

  /** Queue a response for `METHOD /api/v1<path>`, served FIFO. */
  enqueue(method: string, path: string, body: unknown, status = 200): void {
    const key = `${method} /api/v1${path}`;
    const queue = this.queues.get(key) ?? [];
    queue.push({ status, body });
    this.queues.set(key, queue);
  }

  readonly fn: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const call: RecordedCall = { method, url };
    if (typeof init?.body === "string") call.body = JSON.parse(init.body);
    this.calls.push(call);

    const queue = this.queues.get(`${method} ${url}`);
    const scripted = queue?.shift();
    if (!scripted) {
      throw new Error(`no scripted response for ${method} ${url}`);
    }
    return {
      ok: scripted.status >= 200 && scripted.status < 300,
      status: scripted.status,
      json: async () => scripted.body,
    } as unknown as Response;
  };
}
