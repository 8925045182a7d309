"""Single entry-point command exposing every capability for scripting.

Exit codes: 0 success, 1 domain failure (invalid model/config, reject
verdict, inconsistent decisions), 2 usage error. `--json` switches human
tables to canonical JSON on stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import canonical
from .configuration import load_config, validate_product_configuration
from .derivation import (
    DETERMINISTIC_TIMESTAMP, ProductManifest, derive_product, run_validation_suite,
)
from .errors import MlsplError, ParseError
from .feature_model import (
    Selection, enumerate_valid_configurations, propagate_decisions,
)
from .fm_dsl import parse_feature_model
from .model_cards import (
    FeatureRequirement, IntegrationComplexity, ResourceAllocation, card_to_dict,
    find_candidates, load_registry, validate_card,
)
from .monitoring import load_reference, load_trace, monitor_spec_from_dict, run_monitor
from .optimizer import OptimizerParams, nsga2_optimize
from .replacement import load_strategy, select_replacement
from .service import WORKSPACE_ENV


def emit(doc, as_json: bool, human: str) -> None:
    if as_json:
        click.echo(canonical.dumps(doc))
    else:
        click.echo(human)


def domain_errors(fn):
    """Map toolkit exceptions to exit 1 with the message on stderr."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            click.echo(f"PARSE_ERROR: {exc}", err=True)
            sys.exit(1)
        except MlsplError as exc:
            click.echo(f"ERROR: {exc}", err=True)
            sys.exit(1)
    return wrapper


def load_model(path: str):
    return parse_feature_model(Path(path).read_text(encoding="utf-8"))


def load_selection(path: str) -> Selection:
    ids = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(ids, list):
        raise MlsplError(f"selection file must hold a JSON list: {path}")
    return Selection.of(ids)


json_flag = click.option("--json", "as_json", is_flag=True,
                         help="emit canonical JSON instead of text")


@click.group()
def main():
    """Toolkit for software product lines with ML components."""


# --- model -----------------------------------------------------------------

@main.group()
def model():
    """Feature-model operations."""


@model.command("validate")
@click.argument("path", type=click.Path(exists=True))
@json_flag
@domain_errors
def model_validate(path, as_json):
    m = load_model(path)
    emit({"ok": True, "features": len(m.features)}, as_json,
         f"ok: {len(m.features)} features, {len(m.constraints)} constraints")


@model.command("enumerate")
@click.argument("path", type=click.Path(exists=True))
@json_flag
@domain_errors
def model_enumerate(path, as_json):
    m = load_model(path)
    configs = [sorted(s.chosen) for s in enumerate_valid_configurations(m)]
    emit({"count": len(configs), "configurations": configs}, as_json,
         "\n".join(",".join(c) for c in configs) + f"\ntotal: {len(configs)}")


@model.command("propagate")
@click.argument("path", type=click.Path(exists=True))
@click.option("--decide", "decides", multiple=True, metavar="FEATURE=BOOL",
              help="a decision, e.g. --decide FraudDetection=true")
@json_flag
@domain_errors
def model_propagate(path, decides, as_json):
    m = load_model(path)
    decisions = {}
    for item in decides:
        fid, _, raw = item.partition("=")
        if raw.lower() not in ("true", "false"):
            raise click.UsageError(f"expected FEATURE=true|false, got {item!r}")
        decisions[fid] = raw.lower() == "true"
    state = propagate_decisions(m, decisions)
    from .service import decision_state_to_dict
    doc = decision_state_to_dict(state)
    human = "\n".join(f"{k}: {', '.join(v) if isinstance(v, list) else v}"
                      for k, v in doc.items())
    emit(doc, as_json, human)
    if not state.consistent:
        click.echo("INCONSISTENT_DECISIONS", err=True)
        sys.exit(1)


# --- cards -----------------------------------------------------------------

@main.group()
def cards():
    """Model-card operations."""


@cards.command("lint")
@click.argument("paths", type=click.Path(exists=True), nargs=-1, required=True)
@json_flag
@domain_errors
def cards_lint(paths, as_json):
    results = {}
    for path in paths:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        results[path] = validate_card(doc)
    bad = {p: d for p, d in results.items() if d}
    emit({"ok": not bad, "diagnostics": results}, as_json,
         "all cards valid" if not bad else
         "\n".join(f"{p}: {'; '.join(d)}" for p, d in sorted(bad.items())))
    if bad:
        click.echo("CARD_INVALID", err=True)
        sys.exit(1)


@cards.command("list")
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@json_flag
@domain_errors
def cards_list(registry_dir, as_json):
    registry = load_registry(Path(registry_dir))
    rows = registry.cards()
    emit([card_to_dict(c) for c in rows], as_json,
         "\n".join(f"{c.model_id}@{c.version}  accuracy={c.normalized_accuracy()}"
                   f"  complexity={c.integration_complexity}" for c in rows)
         or "no cards")


@cards.command("match")
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--domain", required=True)
@click.option("--min-accuracy", type=float, default=0.0)
@click.option("--max-complexity", default="High")
@click.option("--license", "licenses", multiple=True)
@json_flag
@domain_errors
def cards_match(registry_dir, domain, min_accuracy, max_complexity, licenses, as_json):
    registry = load_registry(Path(registry_dir))
    req = FeatureRequirement(
        domain=domain, min_accuracy=min_accuracy,
        max_integration_complexity=IntegrationComplexity.parse(max_complexity),
        license_allowlist=frozenset(licenses))
    hits = find_candidates(registry, req)
    emit([card_to_dict(c) for c in hits], as_json,
         "\n".join(f"{c.model_id}@{c.version}" for c in hits) or "no matches")


# --- monitor / replace --------------------------------------------------------

@main.group()
def monitor():
    """Monitoring simulation."""


@monitor.command("simulate")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("--trace", "trace_path", required=True, type=click.Path(exists=True))
@click.option("--reference", "reference_path", type=click.Path(exists=True))
@json_flag
@domain_errors
def monitor_simulate(spec_path, trace_path, reference_path, as_json):
    spec = monitor_spec_from_dict(
        json.loads(Path(spec_path).read_text(encoding="utf-8")))
    trace = load_trace(Path(trace_path))
    reference = load_reference(Path(reference_path)) if reference_path else None
    alerts = run_monitor(spec, trace, reference)
    emit([a.to_dict() for a in alerts], as_json,
         "\n".join(f"{a.to_dict()['ts']}  {a.level.value:8s} {a.source}/{a.subject}"
                   f" observed={a.observed} threshold={a.threshold} -> {a.procedure}"
                   for a in alerts) or "no alerts")


@main.group()
def replace():
    """Replacement simulation."""


@replace.command("simulate")
@click.option("--strategy", "strategy_path", required=True,
              type=click.Path(exists=True))
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--domain", required=True)
@click.option("--min-accuracy", type=float, default=0.0)
@click.option("--cpu", type=int, required=True)
@click.option("--ram", type=float, required=True)
@click.option("--gpu", is_flag=True)
@json_flag
@domain_errors
def replace_simulate(strategy_path, registry_dir, domain, min_accuracy,
                     cpu, ram, gpu, as_json):
    strategy = load_strategy(Path(strategy_path))
    registry = load_registry(Path(registry_dir))
    req = FeatureRequirement(domain=domain, min_accuracy=min_accuracy)
    alloc = ResourceAllocation(cpu_cores=cpu, ram_gb=ram, gpu=gpu)
    decision = select_replacement(strategy, registry, req, alloc)
    doc = decision.to_dict()
    emit(doc, as_json, f"{doc['outcome']}: {doc['selected']}")


# --- config / optimize / derive --------------------------------------------------

@main.group()
def config():
    """Product-configuration operations."""


@config.command("validate")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--selection", "selection_path", required=True,
              type=click.Path(exists=True))
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@json_flag
@domain_errors
def config_validate(model_path, selection_path, config_path, registry_dir, as_json):
    m = load_model(model_path)
    sel = load_selection(selection_path)
    cfg = load_config(Path(config_path))
    registry = load_registry(Path(registry_dir))
    report = validate_product_configuration(cfg, m, sel, registry)
    emit(report.to_dict(), as_json,
         ("ok" if report.ok else "invalid") + "".join(
             f"\n{f.severity}: {f.code} [{f.subject}] {f.message}"
             for f in report.findings))
    if not report.ok:
        sys.exit(1)


@main.command("optimize")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--pop", type=int, default=16)
@click.option("--gens", type=int, default=50)
@click.option("--seed", type=int, default=42)
@click.option("--out", "out_path", type=click.Path())
@json_flag
@domain_errors
def optimize(model_path, registry_dir, pop, gens, seed, out_path, as_json):
    m = load_model(model_path)
    registry = load_registry(Path(registry_dir))
    params = OptimizerParams(population_size=pop, generations=gens, seed=seed)
    front = [ind.to_dict() for ind in nsga2_optimize(m, registry, params)]
    if out_path:
        Path(out_path).write_text(canonical.dumps(front) + "\n", encoding="utf-8")
    emit(front, as_json,
         "\n".join(f"{i}: objectives={p['objectives']['values']}"
                   f" selection={','.join(p['selection'])}"
                   for i, p in enumerate(front)))


@main.command("derive")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--selection", "selection_path", required=True,
              type=click.Path(exists=True))
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--monitor", "monitor_paths", multiple=True,
              type=click.Path(exists=True))
@click.option("--strategy", "strategy_paths", multiple=True,
              type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path())
@click.option("--deterministic", is_flag=True,
              help="pin the provenance timestamp for byte-stable output")
@json_flag
@domain_errors
def derive(model_path, selection_path, config_path, registry_dir, monitor_paths,
           strategy_paths, out_path, deterministic, as_json):
    m = load_model(model_path)
    sel = load_selection(selection_path)
    cfg = load_config(Path(config_path))
    registry = load_registry(Path(registry_dir))
    monitors = [monitor_spec_from_dict(json.loads(Path(p).read_text(encoding="utf-8")))
                for p in monitor_paths]
    strategies = [load_strategy(Path(p)) for p in strategy_paths]
    manifest = derive_product(
        m, sel, cfg, registry, monitor_specs=monitors, strategies=strategies,
        now=DETERMINISTIC_TIMESTAMP if deterministic else None)
    if out_path:
        Path(out_path).write_text(manifest.to_json(), encoding="utf-8")
    emit(dict(manifest.doc), as_json, f"derived {manifest.product_id}")


@main.command("validate-product")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True))
@click.option("--registry", "registry_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--trace", "trace_path", type=click.Path(exists=True))
@click.option("--reference", "reference_path", type=click.Path(exists=True))
@click.option("--budget", "budget_path", type=click.Path(exists=True))
@click.option("--no-commands", is_flag=True,
              help="skip declared external test commands")
@json_flag
@domain_errors
def validate_product(manifest_path, registry_dir, trace_path, reference_path,
                     budget_path, no_commands, as_json):
    manifest = ProductManifest.from_json(
        Path(manifest_path).read_text(encoding="utf-8"))
    registry = load_registry(Path(registry_dir))
    trace = load_trace(Path(trace_path)) if trace_path else None
    reference = load_reference(Path(reference_path)) if reference_path else None
    budget = (json.loads(Path(budget_path).read_text(encoding="utf-8"))
              if budget_path else None)
    report = run_validation_suite(manifest, registry, trace=trace,
                                  reference=reference, budget=budget,
                                  run_commands=not no_commands)
    emit(report.to_dict(), as_json,
         f"verdict: {report.verdict}" + "".join(
             f"\n{c.status:4s} {c.category}/{c.name} {c.detail}"
             for c in report.checks))
    if report.verdict != "accept":
        click.echo("VERDICT_REJECT", err=True)
        sys.exit(1)


@main.command("serve")
@click.option("--port", type=int, default=8000)
@click.option("--workspace", "workspace_dir",
              type=click.Path(exists=True, file_okay=False), envvar=WORKSPACE_ENV)
@domain_errors
def serve(port, workspace_dir):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(workspace_dir), host="127.0.0.1", port=port)


if __name__ == "__main__":
    main()
