/**
 * Application wiring: one session against the backing service, the feature
 * tree on the left, the Pareto explorer on the right. All domain behaviour
 * comes back from the server; this file only routes events to API calls and
 * re-renders from the responses.
 */

import { ApiClient, FetchLike } from "./api";
import { pollJob } from "./jobs";
import { Axes, renderPareto } from "./pareto";
import { SessionStore } from "./session";
import { renderBanner, renderTree } from "./tree";
import type { ModelDoc, ParetoPointDoc } from "./types";

const OBJECTIVE_NAMES = ["expected quality", "resource footprint", "integration complexity"];

export interface AppElements {
  tree: HTMLElement;
  banner: HTMLElement;
  pareto: HTMLElement;
  optimizeButton: HTMLElement;
  axisX: HTMLSelectElement;
  axisY: HTMLSelectElement;
}

export class App {
  readonly client: ApiClient;
  readonly session: SessionStore;
  private readonly elements: AppElements;
  private model: ModelDoc | null = null;
  private front: ParetoPointDoc[] = [];

  constructor(elements: AppElements, baseUrl = "", fetchFn?: FetchLike) {
    this.client = fetchFn ? new ApiClient(baseUrl, fetchFn) : new ApiClient(baseUrl);
    this.session = new SessionStore(this.client);
    this.elements = elements;
  }

  async start(): Promise<void> {
    this.model = await this.client.getModel();
    await this.session.open();
    this.elements.optimizeButton.addEventListener("click", () => void this.optimize());
    this.elements.axisX.addEventListener("change", () => this.renderFront());
    this.elements.axisY.addEventListener("change", () => this.renderFront());
    this.render();
  }

  async decide(feature: string, value: boolean): Promise<void> {
    await this.session.submitDecision(feature, value);
    this.render();
  }

  async retract(feature: string): Promise<void> {
    await this.session.retractDecision(feature);
    this.render();
  }

  async optimize(params: Record<string, number> = {}): Promise<void> {
    const { job_id } = await this.client.startOptimize(params);
    this.front = await pollJob(this.client, job_id);
    this.renderFront();
  }

  async adopt(point: ParetoPointDoc): Promise<void> {
    const model = this.requireModel();
    const allIds = model.features.map((f) => f.id).sort();
    await this.session.adoptSelection(allIds, point.selection);
    this.render();
  }

  render(): void {
    const model = this.requireModel();
    const view = this.session.current;
    if (view) {
      renderTree(this.elements.tree, model, view.state, {
        onDecide: (f, v) => void this.decide(f, v),
        onRetract: (f) => void this.retract(f),
      });
    }
    renderBanner(this.elements.banner, this.session.rejectionNotice);
  }

  renderFront(): void {
    renderPareto(this.elements.pareto, this.front, OBJECTIVE_NAMES, this.axes(), {
      onAdopt: (point) => void this.adopt(point),
    });
  }

  private axes(): Axes {
    const x = Number(this.elements.axisX.value);
    let y = Number(this.elements.axisY.value);
    if (y === x) y = (x + 1) % 3;
    return { x, y };
  }

  private requireModel(): ModelDoc {
    if (!this.model) throw new Error("app not started");
    return this.model;
  }
}

export function mount(root: Document = document): App {
  const byId = (id: string) => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
  };
  const app = new App({
    tree: byId("tree"),
    banner: byId("banner"),
    pareto: byId("pareto"),
    optimizeButton: byId("optimize"),
    axisX: byId("axis-x") as HTMLSelectElement,
    axisY: byId("axis-y") as HTMLSelectElement,
  });
  void app.start();
  return app;
}
