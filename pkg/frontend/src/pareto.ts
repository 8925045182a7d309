/**
 * Pareto-front explorer: a scatter plot over two user-selected objectives,
 * with the remaining objective mapped to marker size. Every number shown or
 * stored in the DOM is the server's objective value verbatim; the plot only
 * scales positions, never the data attributes.
 */

import type { ParetoPointDoc } from "./types";

export interface ParetoCallbacks {
  onAdopt?: (point: ParetoPointDoc) => void;
}

export interface Axes {
  x: number;
  y: number;
}

const PLOT_SIZE = 400;
const MIN_RADIUS = 4;
const MAX_RADIUS = 14;

function scale(value: number, lo: number, hi: number, outLo: number, outHi: number): number {
  if (hi === lo) return (outLo + outHi) / 2;
  return outLo + ((value - lo) / (hi - lo)) * (outHi - outLo);
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

export function renderPareto(
  container: HTMLElement,
  front: ParetoPointDoc[],
  objectiveNames: string[],
  axes: Axes,
  callbacks: ParetoCallbacks = {},
): void {
  container.replaceChildren();
  const plot = document.createElement("div");
  plot.className = "pareto-plot";
  plot.dataset.xObjective = objectiveNames[axes.x];
  plot.dataset.yObjective = objectiveNames[axes.y];
  const sizeAxis = [0, 1, 2].find((i) => i !== axes.x && i !== axes.y) ?? 2;
  plot.dataset.sizeObjective = objectiveNames[sizeAxis];

  if (front.length === 0) {
    plot.textContent = "no points";
    container.appendChild(plot);
    return;
  }

  const [xLo, xHi] = extent(front.map((p) => p.objectives.values[axes.x]));
  const [yLo, yHi] = extent(front.map((p) => p.objectives.values[axes.y]));
  const [sLo, sHi] = extent(front.map((p) => p.objectives.values[sizeAxis]));

  front.forEach((point, index) => {
    const values = point.objectives.values;
    const marker = document.createElement("button");
    marker.className = "pareto-point";
    marker.dataset.index = String(index);
    // verbatim objective values; the scaled styles are presentation only
    marker.dataset.x = String(values[axes.x]);
    marker.dataset.y = String(values[axes.y]);
    marker.dataset.size = String(values[sizeAxis]);
    marker.dataset.selection = point.selection.join(",");
    marker.title = objectiveNames
      .map((name, i) => `${name}: ${values[i]}`)
      .join(", ");

    const left = scale(values[axes.x], xLo, xHi, 0, PLOT_SIZE);
    const bottom = scale(values[axes.y], yLo, yHi, 0, PLOT_SIZE);
    const radius = scale(values[sizeAxis], sLo, sHi, MIN_RADIUS, MAX_RADIUS);
    marker.style.left = `${left}px`;
    marker.style.bottom = `${bottom}px`;
    marker.style.width = `${radius * 2}px`;
    marker.style.height = `${radius * 2}px`;

    if (callbacks.onAdopt) {
      marker.addEventListener("click", () => callbacks.onAdopt!(point));
    }
    plot.appendChild(marker);
  });

  container.appendChild(plot);
}
