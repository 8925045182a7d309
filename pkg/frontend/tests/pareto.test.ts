import { beforeEach, describe, expect, it } from "vitest";

import { renderPareto } from "../src/pareto";
import type { ParetoPointDoc } from "../src/types";
import { JOB_DONE_MULTI } from "./fixtures";

const NAMES = ["expected quality", "resource footprint", "integration complexity"];
const FRONT = JOB_DONE_MULTI.result as ParetoPointDoc[];

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='pareto'></div>";
  container = document.getElementById("pareto")!;
});

describe("renderPareto", () => {
  it("renders one marker per pareto point", () => {
    renderPareto(container, FRONT, NAMES, { x: 0, y: 1 });
    expect(container.querySelectorAll(".pareto-point")).toHaveLength(FRONT.length);
  });

  it("stores the server objective values verbatim in data attributes", () => {
    renderPareto(container, FRONT, NAMES, { x: 0, y: 1 });
    const markers = container.querySelectorAll<HTMLElement>(".pareto-point");
    FRONT.forEach((point, i) => {
      const marker = markers[i];
      expect(marker.dataset.x).toBe(String(point.objectives.values[0]));
      expect(marker.dataset.y).toBe(String(point.objectives.values[1]));
      expect(marker.dataset.size).toBe(String(point.objectives.values[2]));
      expect(marker.dataset.selection).toBe(point.selection.join(","));
    });
  });

  it("labels the axes with the selected objectives and sizes by the third", () => {
    renderPareto(container, FRONT, NAMES, { x: 2, y: 0 });
    const plot = container.querySelector<HTMLElement>(".pareto-plot")!;
    expect(plot.dataset.xObjective).toBe(NAMES[2]);
    expect(plot.dataset.yObjective).toBe(NAMES[0]);
    expect(plot.dataset.sizeObjective).toBe(NAMES[1]);
  });

  it("remaps data attributes when the axes change", () => {
    renderPareto(container, FRONT, NAMES, { x: 1, y: 2 });
    const marker = container.querySelector<HTMLElement>(".pareto-point")!;
    expect(marker.dataset.x).toBe(String(FRONT[0].objectives.values[1]));
    expect(marker.dataset.y).toBe(String(FRONT[0].objectives.values[2]));
    expect(marker.dataset.size).toBe(String(FRONT[0].objectives.values[0]));
  });

  it("titles each marker with all objective values", () => {
    renderPareto(container, FRONT, NAMES, { x: 0, y: 1 });
    const marker = container.querySelector<HTMLElement>(".pareto-point")!;
    for (let i = 0; i < 3; i++) {
      expect(marker.title).toContain(`${NAMES[i]}: ${FRONT[0].objectives.values[i]}`);
    }
  });

  it("invokes the adopt callback with the clicked point", () => {
    const adopted: ParetoPointDoc[] = [];
    renderPareto(container, FRONT, NAMES, { x: 0, y: 1 }, {
      onAdopt: (p) => adopted.push(p),
    });
    const markers = container.querySelectorAll<HTMLButtonElement>(".pareto-point");
    markers[1].click();
    expect(adopted).toEqual([FRONT[1]]);
  });

  it("shows a placeholder for an empty front", () => {
    renderPareto(container, [], NAMES, { x: 0, y: 1 });
    expect(container.textContent).toContain("no points");
  });
});
