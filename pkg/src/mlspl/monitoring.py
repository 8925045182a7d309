"""Monitor evaluation over recorded traces: thresholds, drift divergences, alerts.

Divergences use natural log (nats). Distributions are additively smoothed
with epsilon 1e-9 and renormalized before any log is taken, so zero bins
never produce infinities.

Boundary conventions: a performance value equal to `min` is OK; a drift or
business value equal to a threshold already alerts (bad side inclusive).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import MonitorError

EPSILON = 1e-9
LN2 = math.log(2.0)

# how rolling baselines tighten static thresholds, unless the spec overrides
DEFAULT_BASELINE_WARNING_OFFSET = 0.02
DEFAULT_BASELINE_CRITICAL_OFFSET = 0.05


class AlertLevel(str, Enum):
    OK = "OK"
    WARNING = "WARNING"
    CRITICAL = "CRITICAL"


class Frequency(str, Enum):
    HOURLY = "Hourly"
    DAILY = "Daily"
    EVERY_BATCH = "EveryBatch"
    REAL_TIME = "RealTime"


_SOURCE_ORDER = {"business": 0, "drift": 1, "performance": 2}


# --- time helpers -----------------------------------------------------------

def parse_timestamp(text: str) -> datetime:
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


_UNIT_SECONDS = {"s": 1, "m": 60, "h": 3600, "d": 86400, "w": 604800}


def parse_window(text: str) -> timedelta:
    text = text.strip()
    if not text or text[-1] not in _UNIT_SECONDS or not text[:-1].isdigit():
        raise MonitorError(f"unparseable window: {text!r}")
    value = int(text[:-1])
    if value <= 0:
        raise MonitorError(f"window must be positive: {text!r}")
    return timedelta(seconds=value * _UNIT_SECONDS[text[-1]])


# --- divergences -------------------------------------------------------------

def _smooth(p: Sequence[float]) -> list[float]:
    if any(x < 0 for x in p):
        raise MonitorError("distribution entries must be non-negative")
    total = sum(p)
    if total <= 0:
        raise MonitorError("distribution is all zeros")
    smoothed = [x / total + EPSILON for x in p]
    s = sum(smoothed)
    return [x / s for x in smoothed]


def kl_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """KL(p || q) in nats over epsilon-smoothed inputs."""
    if len(p) != len(q):
        raise MonitorError(f"length mismatch: {len(p)} vs {len(q)}")
    if len(p) < 2:
        raise MonitorError("distributions need at least 2 bins")
    ps, qs = _smooth(p), _smooth(q)
    return sum(pi * math.log(pi / qi) for pi, qi in zip(ps, qs))


def js_divergence(p: Sequence[float], q: Sequence[float]) -> float:
    """Jensen-Shannon divergence in nats; symmetric, bounded by ln 2."""
    if len(p) != len(q):
        raise MonitorError(f"length mismatch: {len(p)} vs {len(q)}")
    if len(p) < 2:
        raise MonitorError("distributions need at least 2 bins")
    ps, qs = _smooth(p), _smooth(q)
    mid = [(a + b) / 2 for a, b in zip(ps, qs)]
    kl_pm = sum(pi * math.log(pi / mi) for pi, mi in zip(ps, mid))
    kl_qm = sum(qi * math.log(qi / mi) for qi, mi in zip(qs, mid))
    return 0.5 * kl_pm + 0.5 * kl_qm


def make_histogram(samples: Sequence[float], edges: Sequence[float]) -> list[float]:
    """Normalized bin counts; out-of-range samples clamp to the edge bins."""
    if not samples:
        raise MonitorError("no samples to histogram")
    if len(edges) < 3:
        raise MonitorError("need at least 3 bin edges")
    for a, b in zip(edges, edges[1:]):
        if b <= a:
            raise MonitorError("bin edges must be strictly increasing")
    counts = [0] * (len(edges) - 1)
    for x in samples:
        if x < edges[0]:
            counts[0] += 1
            continue
        if x >= edges[-1]:
            counts[-1] += 1
            continue
        for i in range(len(counts)):
            if edges[i] <= x < edges[i + 1]:
                counts[i] += 1
                break
    n = len(samples)
    return [c / n for c in counts]


# --- spec types --------------------------------------------------------------

@dataclass(frozen=True)
class PerformanceThreshold:
    min: float
    critical: float
    window: str

    def validate(self, name: str) -> None:
        if not self.critical < self.min:
            raise MonitorError(f"performance threshold {name}: critical must be < min")
        parse_window(self.window)


@dataclass(frozen=True)
class DriftThreshold:
    metric: str  # KL-Divergence | JS-Divergence
    warning: float
    critical: float
    window: str

    def validate(self, name: str) -> None:
        if self.metric not in ("KL-Divergence", "JS-Divergence"):
            raise MonitorError(f"drift threshold {name}: unknown metric {self.metric!r}")
        if not self.warning < self.critical:
            raise MonitorError(f"drift threshold {name}: warning must be < critical")
        parse_window(self.window)


@dataclass(frozen=True)
class BusinessThreshold:
    warning: float
    critical: float
    window: str

    def validate(self, name: str) -> None:
        if not self.warning < self.critical:
            raise MonitorError(f"business threshold {name}: warning must be < critical")
        parse_window(self.window)


@dataclass(frozen=True)
class MonitorSpec:
    component_id: str
    metrics: tuple[str, ...]
    frequency: Frequency
    data_collection_strategy: str
    baseline_establishment: str
    performance_thresholds: Mapping[str, PerformanceThreshold]
    drift_thresholds: Mapping[str, DriftThreshold]
    business_thresholds: Mapping[str, BusinessThreshold]
    alert_procedures: Mapping[str, str]  # warning_level / critical_level
    baseline_warning_offset: float = DEFAULT_BASELINE_WARNING_OFFSET
    baseline_critical_offset: float = DEFAULT_BASELINE_CRITICAL_OFFSET

    def validate(self) -> None:
        for name, t in self.performance_thresholds.items():
            if name not in self.metrics:
                raise MonitorError(f"threshold on unknown metric: {name}")
            t.validate(name)
        for name, t in self.drift_thresholds.items():
            t.validate(name)
        for name, t in self.business_thresholds.items():
            t.validate(name)

    def procedure_for(self, level: AlertLevel) -> str:
        key = "warning_level" if level is AlertLevel.WARNING else "critical_level"
        return self.alert_procedures.get(key, "")


def monitor_spec_from_dict(doc: Mapping) -> MonitorSpec:
    mc = doc["monitoring_configuration"]
    td = doc.get("threshold_definitions", {})
    iv = doc.get("intervention_strategies", {})
    spec = MonitorSpec(
        component_id=doc["component_id"],
        metrics=tuple(mc.get("metrics", [])),
        frequency=Frequency(mc["frequency"]),
        data_collection_strategy=mc.get("data_collection_strategy", "StreamingLogs"),
        baseline_establishment=mc.get("baseline_establishment", "StaticThresholds"),
        performance_thresholds={
            k: PerformanceThreshold(v["min"], v["critical"], v.get("window", "24h"))
            for k, v in td.get("performance_thresholds", {}).items()},
        drift_thresholds={
            k: DriftThreshold(v["metric"], v["warning"], v["critical"], v.get("window", "7d"))
            for k, v in td.get("drift_detection_thresholds", {}).items()},
        business_thresholds={
            k: BusinessThreshold(v["warning"], v["critical"], v.get("window", "24h"))
            for k, v in td.get("business_impact_thresholds", {}).items()},
        alert_procedures=dict(iv.get("alert_procedures", {})),
        baseline_warning_offset=mc.get("baseline_warning_offset",
                                       DEFAULT_BASELINE_WARNING_OFFSET),
        baseline_critical_offset=mc.get("baseline_critical_offset",
                                        DEFAULT_BASELINE_CRITICAL_OFFSET),
    )
    spec.validate()
    return spec


def monitor_spec_to_dict(spec: MonitorSpec) -> dict:
    return {
        "component_id": spec.component_id,
        "monitoring_configuration": {
            "metrics": list(spec.metrics),
            "frequency": spec.frequency.value,
            "data_collection_strategy": spec.data_collection_strategy,
            "baseline_establishment": spec.baseline_establishment,
        },
        "threshold_definitions": {
            "performance_thresholds": {
                k: {"min": t.min, "critical": t.critical, "window": t.window}
                for k, t in spec.performance_thresholds.items()},
            "drift_detection_thresholds": {
                k: {"metric": t.metric, "warning": t.warning, "critical": t.critical,
                    "window": t.window}
                for k, t in spec.drift_thresholds.items()},
            "business_impact_thresholds": {
                k: {"warning": t.warning, "critical": t.critical, "window": t.window}
                for k, t in spec.business_thresholds.items()},
        },
        "intervention_strategies": {"alert_procedures": dict(spec.alert_procedures)},
    }


# --- trace types --------------------------------------------------------------

@dataclass(frozen=True)
class MetricSample:
    ts: datetime
    metric: str
    value: float


@dataclass(frozen=True)
class DistributionSnapshot:
    ts: datetime
    kind: str  # input_histogram | prediction_histogram
    bins: tuple[float, ...]


@dataclass(frozen=True)
class CounterSample:
    ts: datetime
    counter: str
    count: int


@dataclass(frozen=True)
class Trace:
    samples: tuple[MetricSample, ...] = ()
    snapshots: tuple[DistributionSnapshot, ...] = ()
    counters: tuple[CounterSample, ...] = ()


def load_trace(path: Path) -> Trace:
    samples, snapshots, counters = [], [], []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MonitorError(f"{path}:{lineno}: bad JSON: {exc}")
        parse_trace_record(rec, samples, snapshots, counters)
    return Trace(tuple(samples), tuple(snapshots), tuple(counters))


def trace_from_records(records: Iterable[Mapping]) -> Trace:
    samples, snapshots, counters = [], [], []
    for rec in records:
        parse_trace_record(rec, samples, snapshots, counters)
    return Trace(tuple(samples), tuple(snapshots), tuple(counters))


def parse_trace_record(rec: Mapping, samples, snapshots, counters) -> None:
    ts = parse_timestamp(rec["ts"])
    if "metric" in rec:
        samples.append(MetricSample(ts, rec["metric"], float(rec["value"])))
    elif "kind" in rec:
        snapshots.append(DistributionSnapshot(ts, rec["kind"], tuple(rec["bins"])))
    elif "counter" in rec:
        counters.append(CounterSample(ts, rec["counter"], int(rec["count"])))
    else:
        raise MonitorError(f"unrecognized trace record: {rec}")


@dataclass(frozen=True)
class Alert:
    ts: datetime
    component_id: str
    source: str  # performance | drift | business
    subject: str
    level: AlertLevel
    observed: float
    threshold: float
    procedure: str

    def to_dict(self) -> dict:
        return {
            "ts": format_timestamp(self.ts),
            "component_id": self.component_id,
            "source": self.source,
            "subject": self.subject,
            "level": self.level.value,
            "observed": self.observed,
            "threshold": self.threshold,
            "procedure": self.procedure,
        }


# --- evaluation ---------------------------------------------------------------

def compute_baseline(series: Sequence[MetricSample], baseline_establishment: str,
                     at: datetime) -> Optional[float]:
    """Rolling 7-day mean over [at - 7d, at); static baselines return None."""
    for a, b in zip(series, series[1:]):
        if b.ts < a.ts:
            raise MonitorError("metric series must be sorted by timestamp")
    if baseline_establishment != "Rolling7DayAverage":
        return None
    lo = at - timedelta(days=7)
    window = [s.value for s in series if lo <= s.ts < at]
    if not window:
        return None
    return sum(window) / len(window)


def evaluate_performance(value: float, min_threshold: float,
                         critical_threshold: float) -> AlertLevel:
    if not critical_threshold < min_threshold:
        raise MonitorError("critical must be < min")
    if value < critical_threshold:
        return AlertLevel.CRITICAL
    if value < min_threshold:
        return AlertLevel.WARNING
    return AlertLevel.OK


def evaluate_drift(value: float, warning: float, critical: float) -> AlertLevel:
    if not warning < critical:
        raise MonitorError("warning must be < critical")
    if value >= critical:
        return AlertLevel.CRITICAL
    if value >= warning:
        return AlertLevel.WARNING
    return AlertLevel.OK


_DRIFT_SNAPSHOT_KIND = {
    "DataDrift": "input_histogram",
    "ConceptDrift": "prediction_histogram",
}


def _align_floor(ts: datetime, period: timedelta) -> datetime:
    epoch = datetime(1970, 1, 1, tzinfo=timezone.utc)
    seconds = (ts - epoch).total_seconds()
    psec = period.total_seconds()
    return epoch + timedelta(seconds=math.floor(seconds / psec) * psec)


def _ticks(spec: MonitorSpec, trace: Trace) -> list[datetime]:
    events = ([s.ts for s in trace.samples] + [s.ts for s in trace.snapshots]
              + [c.ts for c in trace.counters])
    if not events:
        return []
    if spec.frequency is Frequency.EVERY_BATCH:
        return sorted({s.ts for s in trace.snapshots})
    if spec.frequency is Frequency.REAL_TIME:
        return sorted({s.ts for s in trace.samples})
    period = timedelta(hours=1) if spec.frequency is Frequency.HOURLY else timedelta(days=1)
    first, last = min(events), max(events)
    tick = _align_floor(first, period) + period
    ticks = []
    while tick - period <= last:
        ticks.append(tick)
        tick += period
    return ticks


def run_monitor(spec: MonitorSpec, trace: Trace,
                reference: Optional[Sequence[float]] = None) -> list[Alert]:
    """Evaluate all thresholds at each frequency tick; one alert per (tick, subject)."""
    spec.validate()
    if spec.drift_thresholds and reference is None:
        raise MonitorError("drift thresholds configured but no reference distribution given")
    _check_sorted(trace)
    alerts: list[Alert] = []
    series_by_metric: dict[str, list[MetricSample]] = {}
    for s in trace.samples:
        series_by_metric.setdefault(s.metric, []).append(s)

    for tick in _ticks(spec, trace):
        # performance
        for metric, t in sorted(spec.performance_thresholds.items()):
            series = series_by_metric.get(metric, [])
            window = parse_window(t.window)
            values = [s.value for s in series if tick - window < s.ts <= tick]
            if not values:
                continue
            value = sum(values) / len(values)
            min_eff, crit_eff = t.min, t.critical
            baseline = compute_baseline(series, spec.baseline_establishment, tick)
            if baseline is not None:
                min_eff = max(min_eff, baseline - spec.baseline_warning_offset)
                crit_eff = max(crit_eff, baseline - spec.baseline_critical_offset)
            level = evaluate_performance(value, min_eff, crit_eff)
            if level is not AlertLevel.OK:
                threshold = crit_eff if level is AlertLevel.CRITICAL else min_eff
                alerts.append(Alert(tick, spec.component_id, "performance", metric,
                                    level, value, threshold, spec.procedure_for(level)))
        # drift
        for name, t in sorted(spec.drift_thresholds.items()):
            kind = _DRIFT_SNAPSHOT_KIND.get(name, "input_histogram")
            window = parse_window(t.window)
            snaps = [s for s in trace.snapshots
                     if s.kind == kind and tick - window < s.ts <= tick]
            if not snaps:
                continue
            fn = kl_divergence if t.metric == "KL-Divergence" else js_divergence
            worst = max(fn(list(s.bins), list(reference)) for s in snaps)
            level = evaluate_drift(worst, t.warning, t.critical)
            if level is not AlertLevel.OK:
                threshold = t.critical if level is AlertLevel.CRITICAL else t.warning
                alerts.append(Alert(tick, spec.component_id, "drift", name,
                                    level, worst, threshold, spec.procedure_for(level)))
        # business impact
        for name, t in sorted(spec.business_thresholds.items()):
            window = parse_window(t.window)
            in_window = [c.count for c in trace.counters
                         if c.counter == name and tick - window < c.ts <= tick]
            if not in_window:
                continue
            total = float(sum(in_window))
            level = evaluate_drift(total, t.warning, t.critical)
            if level is not AlertLevel.OK:
                threshold = t.critical if level is AlertLevel.CRITICAL else t.warning
                alerts.append(Alert(tick, spec.component_id, "business", name,
                                    level, total, threshold, spec.procedure_for(level)))

    alerts.sort(key=lambda a: (a.ts, _SOURCE_ORDER[a.source], a.subject))
    return alerts


def _check_sorted(trace: Trace) -> None:
    per_metric: dict[str, datetime] = {}
    for s in trace.samples:
        prev = per_metric.get(s.metric)
        if prev is not None and s.ts < prev:
            raise MonitorError(f"trace not sorted for metric {s.metric}")
        per_metric[s.metric] = s.ts


def load_reference(path: Path) -> list[float]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return list(doc["bins"])
