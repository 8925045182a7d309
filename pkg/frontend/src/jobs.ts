/**
 * Job polling: repeatedly fetch a job until it leaves the pending/running
 * states, then resolve with the Pareto front or reject with the server's
 * error message verbatim.
 */

import { ApiClient } from "./api";
import type { JobDoc, ParetoPointDoc } from "./types";

export interface PollOptions {
  intervalMs?: number;
  maxAttempts?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export async function pollJob(
  client: ApiClient,
  jobId: string,
  options: PollOptions = {},
): Promise<ParetoPointDoc[]> {
  const interval = options.intervalMs ?? 250;
  const maxAttempts = options.maxAttempts ?? 240;
  const sleep = options.sleep ?? defaultSleep;

  let job: JobDoc = await client.getJob(jobId);
  for (let attempt = 1; job.status === "pending" || job.status === "running"; attempt++) {
    if (attempt >= maxAttempts) {
      throw new Error(`job ${jobId} still ${job.status} after ${maxAttempts} polls`);
    }
    await sleep(interval);
    job = await client.getJob(jobId);
  }
  if (job.status === "failed") {
    throw new Error(job.error ?? "optimization failed");
  }
  return job.result ?? [];
}
