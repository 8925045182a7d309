/**
 * Wire types mirroring the /api/v1 JSON contract.
 *
 * The UI never computes validity, propagation, dominance, or divergences.
 * Everything rendered here is a field of one of these payloads.
 */

export interface FeatureDoc {
  id: string;
  name: string;
  kind: "classic" | "ml_based";
  quality_profile_ref: string | null;
}

export interface GroupDoc {
  parent: string;
  members: string[];
  kind: string;
  cardinality: [number, number];
}

export interface ProfileDoc {
  feature_id: string;
  feature_type: string;
  ml_component_id: string;
  quality_distribution: {
    accuracy_range: [number, number];
    context_sensitivity: Record<string, number>;
    confidence_intervals: Record<string, [number, number]>;
  };
}

export interface ModelDoc {
  root: string;
  features: FeatureDoc[];
  groups: GroupDoc[];
  constraints: string[];
  profiles: ProfileDoc[];
}

export interface DecisionStateDoc {
  decided_true: string[];
  decided_false: string[];
  forced_true: string[];
  forced_false: string[];
  open: string[];
  consistent: boolean;
}

export interface SessionDoc {
  session_id: string;
  decisions: Record<string, boolean>;
  state: DecisionStateDoc;
}

export interface CardDoc {
  model_details: { model_id: string; version: number; license: string; [k: string]: unknown };
  spl_reusability_profile: {
    supported_domains: string[];
    integration_complexity: string;
    [k: string]: unknown;
  };
  performance_metrics: Record<string, number>;
  caveats: string[];
  [section: string]: unknown;
}

export interface ObjectivesDoc {
  values: number[];
  senses: string[];
}

export interface ParetoPointDoc {
  selection: string[];
  bindings: Record<string, { id: string; type: string; reason: string }>;
  objectives: ObjectivesDoc;
}

export interface JobDoc {
  job_id: string;
  status: "pending" | "running" | "done" | "failed";
  result?: ParetoPointDoc[];
  error?: string;
}

/** Per-node display status; a direct restatement of the DecisionState sets. */
export type NodeStatus =
  | "decided-true"
  | "decided-false"
  | "forced-true"
  | "forced-false"
  | "open";
