/**
 * Feature-tree rendering: one nested list mirroring the model's groups, with
 * each node's status class copied from the latest DecisionState. No status
 * is ever computed client-side.
 */

import type { DecisionStateDoc, ModelDoc, NodeStatus } from "./types";

export interface TreeCallbacks {
  onDecide?: (feature: string, value: boolean) => void;
  onRetract?: (feature: string) => void;
}

export function statusOf(state: DecisionStateDoc, feature: string): NodeStatus {
  if (state.decided_true.includes(feature)) return "decided-true";
  if (state.decided_false.includes(feature)) return "decided-false";
  if (state.forced_true.includes(feature)) return "forced-true";
  if (state.forced_false.includes(feature)) return "forced-false";
  return "open";
}

function childrenByParent(model: ModelDoc): Map<string, string[]> {
  const children = new Map<string, string[]>();
  for (const group of model.groups) {
    const existing = children.get(group.parent) ?? [];
    children.set(group.parent, existing.concat(group.members));
  }
  return children;
}

function renderNode(
  model: ModelDoc,
  children: Map<string, string[]>,
  state: DecisionStateDoc,
  featureId: string,
  callbacks: TreeCallbacks,
): HTMLLIElement {
  const feature = model.features.find((f) => f.id === featureId);
  const li = document.createElement("li");
  li.dataset.feature = featureId;
  li.dataset.status = statusOf(state, featureId);
  li.classList.add("feature", li.dataset.status);

  const label = document.createElement("span");
  label.className = "feature-label";
  label.textContent = feature?.name ?? featureId;
  li.appendChild(label);

  if (feature?.kind === "ml_based") {
    const badge = document.createElement("span");
    badge.className = "ml-badge";
    badge.textContent = "ML";
    if (feature.quality_profile_ref) {
      badge.dataset.profile = feature.quality_profile_ref;
      badge.title = profileSummary(model, feature.quality_profile_ref);
    }
    li.appendChild(badge);
  }

  const status = li.dataset.status as NodeStatus;
  if (status === "open" && callbacks.onDecide) {
    for (const value of [true, false]) {
      const button = document.createElement("button");
      button.className = value ? "decide-true" : "decide-false";
      button.textContent = value ? "include" : "exclude";
      button.addEventListener("click", () => callbacks.onDecide!(featureId, value));
      li.appendChild(button);
    }
  }
  if ((status === "decided-true" || status === "decided-false") && callbacks.onRetract) {
    const button = document.createElement("button");
    button.className = "retract";
    button.textContent = "retract";
    button.addEventListener("click", () => callbacks.onRetract!(featureId));
    li.appendChild(button);
  }

  const members = children.get(featureId) ?? [];
  if (members.length > 0) {
    const ul = document.createElement("ul");
    for (const member of members) {
      ul.appendChild(renderNode(model, children, state, member, callbacks));
    }
    li.appendChild(ul);
  }
  return li;
}

/** Popover body for the ML badge, quoting the profile document verbatim. */
function profileSummary(model: ModelDoc, profileRef: string): string {
  const profile = model.profiles.find((p) => p.feature_id === profileRef);
  if (!profile) return profileRef;
  const [lo, hi] = profile.quality_distribution.accuracy_range;
  return `${profile.ml_component_id}: accuracy ${lo}..${hi}`;
}

export function renderTree(
  container: HTMLElement,
  model: ModelDoc,
  state: DecisionStateDoc,
  callbacks: TreeCallbacks = {},
): void {
  container.replaceChildren();
  const root = document.createElement("ul");
  root.className = "feature-tree";
  root.appendChild(renderNode(model, childrenByParent(model), state, model.root, callbacks));
  container.appendChild(root);
}

export function renderBanner(container: HTMLElement, notice: string): void {
  container.textContent = notice;
  container.classList.toggle("visible", notice !== "");
}
