/**
 * Session store: the single client-side holder of the server's session view.
 *
 * All constraint knowledge lives on the server. Submitting a decision either
 * replaces the whole view with the server's response (200) or, on a 409,
 * keeps the previous view untouched and records the rejection notice. At
 * most one mutation is in flight at a time.
 */

import { ApiClient, ApiError } from "./api";
import type { NodeStatus, SessionDoc } from "./types";

export class SessionStore {
  private readonly client: ApiClient;
  private view: SessionDoc | null = null;
  private notice = "";
  private busy = false;

  constructor(client: ApiClient) {
    this.client = client;
  }

  get current(): SessionDoc | null {
    return this.view;
  }

  /** Last rejection notice; empty after any successful mutation. */
  get rejectionNotice(): string {
    return this.notice;
  }

  async open(): Promise<SessionDoc> {
    this.view = await this.client.createSession();
    this.notice = "";
    return this.view;
  }

  async submitDecision(feature: string, value: boolean): Promise<boolean> {
    const view = this.require();
    if (this.busy) throw new Error("a mutation is already in flight");
    this.busy = true;
    try {
      this.view = await this.client.postDecision(view.session_id, feature, value);
      this.notice = "";
      return true;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // rejected: the tree must not change
        this.notice = `inconsistent decision rejected: ${error.message}`;
        return false;
      }
      throw error;
    } finally {
      this.busy = false;
    }
  }

  async retractDecision(feature: string): Promise<void> {
    const view = this.require();
    this.view = await this.client.retractDecision(view.session_id, feature);
    this.notice = "";
  }

  /**
   * Adopt a Pareto point: replay its selection as explicit decisions so the
   * session can be refined manually afterwards. The server decides what each
   * decision propagates to.
   */
  async adoptSelection(allFeatureIds: string[], selection: string[]): Promise<void> {
    const chosen = new Set(selection);
    for (const feature of allFeatureIds) {
      const ok = await this.submitDecision(feature, chosen.has(feature));
      if (!ok) {
        throw new Error(`adoption failed at ${feature}: ${this.notice}`);
      }
    }
  }

  /** Status of one feature, read directly off the server's DecisionState. */
  statusOf(feature: string): NodeStatus {
    const state = this.require().state;
    if (state.decided_true.includes(feature)) return "decided-true";
    if (state.decided_false.includes(feature)) return "decided-false";
    if (state.forced_true.includes(feature)) return "forced-true";
    if (state.forced_false.includes(feature)) return "forced-false";
    return "open";
  }

  /** Features currently in the product: decided true or forced true. */
  selectedFeatures(): string[] {
    const state = this.require().state;
    return [...state.decided_true, ...state.forced_true].sort();
  }

  private require(): SessionDoc {
    if (!this.view) throw new Error("no open session");
    return this.view;
  }
}
