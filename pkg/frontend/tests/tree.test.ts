import { beforeEach, describe, expect, it } from "vitest";

import { renderBanner, renderTree, statusOf } from "../src/tree";
import { DECISION_FULLY_AUTOMATED, MODEL, SESSION_INITIAL } from "./fixtures";

let container: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "<div id='tree'></div>";
  container = document.getElementById("tree")!;
});

function statusIn(root: HTMLElement, feature: string): string | undefined {
  const li = root.querySelector<HTMLElement>(`li[data-feature="${feature}"]`);
  return li?.dataset.status;
}

function directChild(li: Element, selector: string): HTMLElement | null {
  for (const child of li.children) {
    if (child.matches(selector)) return child as HTMLElement;
  }
  return null;
}

describe("renderTree", () => {
  it("renders one node per model feature", () => {
    renderTree(container, MODEL, SESSION_INITIAL.state);
    const ids = [...container.querySelectorAll<HTMLElement>("li[data-feature]")]
      .map((li) => li.dataset.feature)
      .sort();
    expect(ids).toEqual(MODEL.features.map((f) => f.id).sort());
  });

  it("nests members under their group parent", () => {
    renderTree(container, MODEL, SESSION_INITIAL.state);
    for (const group of MODEL.groups) {
      const parent = container.querySelector(`li[data-feature="${group.parent}"]`)!;
      for (const member of group.members) {
        expect(parent.querySelector(`li[data-feature="${member}"]`)).not.toBeNull();
      }
    }
  });

  it("copies every node status from the server DecisionState verbatim", () => {
    const state = DECISION_FULLY_AUTOMATED.state;
    renderTree(container, MODEL, state);
    for (const f of state.decided_true) expect(statusIn(container, f)).toBe("decided-true");
    for (const f of state.forced_true) expect(statusIn(container, f)).toBe("forced-true");
    for (const f of state.forced_false) expect(statusIn(container, f)).toBe("forced-false");
    for (const f of state.open) expect(statusIn(container, f)).toBe("open");
  });

  it("marks exactly the ml features with a badge", () => {
    renderTree(container, MODEL, SESSION_INITIAL.state);
    const badged = [...container.querySelectorAll<HTMLElement>("li[data-feature]")]
      .filter((li) => directChild(li, ".ml-badge"))
      .map((li) => li.dataset.feature)
      .sort();
    expect(badged).toEqual(
      MODEL.features.filter((f) => f.kind === "ml_based").map((f) => f.id).sort(),
    );
  });

  it("links the badge to the feature's quality profile", () => {
    renderTree(container, MODEL, SESSION_INITIAL.state);
    for (const feature of MODEL.features) {
      if (feature.kind !== "ml_based") continue;
      const li = container.querySelector(`li[data-feature="${feature.id}"]`)!;
      const badge = directChild(li, ".ml-badge")!;
      expect(badge.dataset.profile).toBe(feature.quality_profile_ref);
      const profile = MODEL.profiles.find(
        (p) => p.feature_id === feature.quality_profile_ref,
      )!;
      expect(badge.title).toContain(profile.ml_component_id);
    }
  });

  it("offers decide buttons only on open nodes and retract only on decided ones", () => {
    const state = DECISION_FULLY_AUTOMATED.state;
    renderTree(container, MODEL, state, { onDecide: () => {}, onRetract: () => {} });
    for (const li of container.querySelectorAll<HTMLElement>("li[data-feature]")) {
      const status = li.dataset.status;
      const canDecide = directChild(li, "button.decide-true") !== null;
      const canRetract = directChild(li, "button.retract") !== null;
      expect(canDecide).toBe(status === "open");
      expect(canRetract).toBe(status === "decided-true" || status === "decided-false");
    }
  });

  it("forwards decide clicks with the feature id and value", () => {
    const seen: Array<[string, boolean]> = [];
    renderTree(container, MODEL, SESSION_INITIAL.state, {
      onDecide: (f, v) => seen.push([f, v]),
    });
    const li = container.querySelector(`li[data-feature="FullyAutomated"]`)!;
    directChild(li, "button.decide-true")!.click();
    directChild(li, "button.decide-false")!.click();
    expect(seen).toEqual([
      ["FullyAutomated", true],
      ["FullyAutomated", false],
    ]);
  });

  it("statusOf mirrors the five DecisionState sets", () => {
    const state = DECISION_FULLY_AUTOMATED.state;
    expect(statusOf(state, "FullyAutomated")).toBe("decided-true");
    expect(statusOf(state, "HumanAssisted")).toBe("forced-false");
    expect(statusOf(state, "ContentModeration")).toBe("forced-true");
    expect(statusOf(state, "SentimentAnalysis")).toBe("open");
  });
});

describe("renderBanner", () => {
  it("shows the notice text and toggles visibility", () => {
    const banner = document.createElement("div");
    renderBanner(banner, "rejected");
    expect(banner.textContent).toBe("rejected");
    expect(banner.classList.contains("visible")).toBe(true);
    renderBanner(banner, "");
    expect(banner.classList.contains("visible")).toBe(false);
  });
});
