"""Model card validation, normalization, matching, ranking, and persistence."""
import dataclasses
import json

import pytest
from hypothesis import given, strategies as st

from mlspl.errors import CardError, DuplicateCardError
from mlspl.model_cards import (
    CardRegistry, FeatureRequirement, IntegrationComplexity, ModelCard,
    ResourceAllocation, card_from_dict, card_to_dict, check_resource_fit,
    find_candidates, load_registry, matches_requirement, normalize_metric,
    register_card, save_registry, validate_card,
)


def make_card(**overrides) -> ModelCard:
    base = dict(
        model_id="m1", version=1, developed_by="dev", model_type="Text Classification",
        license="MIT", primary_use="use", out_of_scope_use="",
        supported_domains=("Products",), integration_complexity="Medium",
        api_endpoint="", deployment_guidance="",
        performance_metrics={"Accuracy": 0.80}, cpu="1 CPU Core", ram="2GB", gpu="",
    )
    base.update(overrides)
    return ModelCard(**base)


class TestCardParsing:
    def test_reference_card_fields(self, tc001_card):
        assert tc001_card.model_id == "tc_001"
        assert tc001_card.version == 2
        assert tc001_card.license == "Apache-2.0"
        assert tc001_card.integration_complexity == "Low"
        assert tc001_card.supported_domains == ("Movies", "Series", "Music", "Products")
        assert len(tc001_card.caveats) == 1
        assert "Afghanistan" in tc001_card.caveats[0]

    def test_hyphenated_out_of_scope_accepted(self, tc001_card):
        assert tc001_card.out_of_scope_use.startswith("The model was not trained")

    def test_reference_card_normalization(self, tc001_card):
        assert tc001_card.normalized_accuracy() == pytest.approx(0.913)
        assert tc001_card.min_cpu_cores() == 2
        assert tc001_card.ram_gb() == 4.0
        assert tc001_card.gpu_required() is False
        assert tc001_card.complexity() is IntegrationComplexity.LOW

    def test_roundtrip(self, tc001_card):
        again = card_from_dict(card_to_dict(tc001_card))
        assert again == tc001_card

    def test_unit_scale_accuracy_untouched(self):
        assert normalize_metric(0.913) == 0.913
        assert normalize_metric(91.3) == pytest.approx(0.913)
        # boundary: exactly 1.0 is already on the unit scale
        assert normalize_metric(1.0) == 1.0

    def test_gpu_spellings(self):
        for text in ("Optional", "None", "no", ""):
            assert make_card(gpu=text).gpu_required() is False
        for text in ("Required", "1x A100", "yes"):
            assert make_card(gpu=text).gpu_required() is True

    def test_ram_parse_failures(self):
        with pytest.raises(CardError):
            make_card(ram="lots").ram_gb()
        with pytest.raises(CardError):
            make_card(ram="0GB").ram_gb()
        assert make_card(ram="1.5 GB").ram_gb() == 1.5

    def test_cpu_parse(self):
        assert make_card(cpu="8 cores").min_cpu_cores() == 8
        with pytest.raises(CardError):
            make_card(cpu="many").min_cpu_cores()

    def test_complexity_ordering(self):
        assert IntegrationComplexity.LOW < IntegrationComplexity.MEDIUM < IntegrationComplexity.HIGH
        assert IntegrationComplexity.parse("low") is IntegrationComplexity.LOW
        assert IntegrationComplexity.LOW.label() == "Low"
        with pytest.raises(CardError):
            IntegrationComplexity.parse("Extreme")


class TestValidation:
    def test_reference_card_valid(self, tc001_card):
        assert validate_card(tc001_card) == []

    def test_missing_sections_reported(self, fixtures):
        doc = json.loads((fixtures / "tc001_card.json").read_text())
        del doc["model_usage"]
        del doc["caveats_recommendations"]
        diags = validate_card(doc)
        assert "model_usage: missing section" in diags
        assert "caveats: missing section" in diags

    def test_bad_values(self):
        diags = validate_card(make_card(model_id="", version=0, ram="?", cpu="?",
                                        integration_complexity="Extreme"))
        assert any(d.startswith("model_details.model_id") for d in diags)
        assert any(d.startswith("model_details.version") for d in diags)
        assert any("ram" in d for d in diags)
        assert any("cpu" in d for d in diags)
        assert any("integration_complexity" in d for d in diags)

    def test_nonfinite_metric(self):
        diags = validate_card(make_card(performance_metrics={"Accuracy": float("nan")}))
        assert any("must be finite" in d for d in diags)


class TestRegistry:
    def test_register_and_lookup(self, tc001_card):
        reg = register_card(CardRegistry(), tc001_card)
        assert reg.lookup("tc_001", 2) is tc001_card
        assert reg.lookup("tc_001", 1) is None
        assert reg.latest("tc_001") is tc001_card
        assert reg.latest("nope") is None

    def test_duplicate_rejected(self, tc001_registry, tc001_card):
        with pytest.raises(DuplicateCardError):
            register_card(tc001_registry, tc001_card)

    def test_invalid_card_rejected(self):
        with pytest.raises(CardError):
            register_card(CardRegistry(), make_card(model_id=""))

    def test_register_is_copy_on_write(self, tc001_card):
        empty = CardRegistry()
        register_card(empty, tc001_card)
        assert empty.entries == {}

    def test_latest_prefers_highest_version(self, tc001_card):
        v3 = dataclasses.replace(tc001_card, version=3)
        reg = register_card(register_card(CardRegistry(), v3), tc001_card)
        assert reg.latest("tc_001").version == 3

    def test_persistence_roundtrip(self, tmp_path, tc001_card):
        reg = CardRegistry(
            entries={("tc_001", 2): tc001_card,
                     ("org/model", 1): make_card(model_id="org/model")},
            software_components={"rule_based": "fallback classifier"})
        save_registry(reg, tmp_path)
        # slashes in ids must not become directories
        assert (tmp_path / "org__model@1.json").exists()
        loaded = load_registry(tmp_path)
        assert loaded.entries == dict(reg.entries)
        assert loaded.software_components == dict(reg.software_components)

    def test_load_missing_directory(self, tmp_path):
        reg = load_registry(tmp_path / "absent")
        assert reg.cards() == []


class TestMatching:
    def test_reference_card_matches_products(self, tc001_card):
        req = FeatureRequirement(domain="Products", min_accuracy=0.90)
        assert matches_requirement(tc001_card, req)

    def test_domain_case_insensitive(self, tc001_card):
        assert matches_requirement(tc001_card, FeatureRequirement(domain="movies"))

    def test_rejections(self, tc001_card):
        assert not matches_requirement(tc001_card, FeatureRequirement(domain="Finance"))
        assert not matches_requirement(
            tc001_card, FeatureRequirement(domain="Products", min_accuracy=0.95))
        assert not matches_requirement(
            tc001_card, FeatureRequirement(domain="Products",
                                           license_allowlist=frozenset({"MIT"})))

    def test_complexity_cap(self):
        card = make_card(integration_complexity="High")
        req = FeatureRequirement(domain="Products",
                                 max_integration_complexity=IntegrationComplexity.MEDIUM)
        assert not matches_requirement(card, req)
        assert matches_requirement(card, FeatureRequirement(domain="Products"))

    def test_missing_accuracy_never_matches(self):
        card = make_card(performance_metrics={})
        assert not matches_requirement(card, FeatureRequirement(domain="Products"))

    def test_ranking_order(self):
        # accuracy desc, complexity asc, id asc, version desc
        cards = [
            make_card(model_id="b", performance_metrics={"Accuracy": 0.90}),
            make_card(model_id="a", performance_metrics={"Accuracy": 0.90}),
            make_card(model_id="a", version=2, performance_metrics={"Accuracy": 0.90}),
            make_card(model_id="c", performance_metrics={"Accuracy": 95.0},
                      integration_complexity="High"),
            make_card(model_id="d", performance_metrics={"Accuracy": 0.95},
                      integration_complexity="Low"),
        ]
        reg = CardRegistry()
        for c in cards:
            reg = register_card(reg, c)
        ranked = find_candidates(reg, FeatureRequirement(domain="Products"))
        keys = [(c.model_id, c.version) for c in ranked]
        assert keys == [("d", 1), ("c", 1), ("a", 2), ("a", 1), ("b", 1)]

    @given(st.lists(st.tuples(st.floats(min_value=0, max_value=1),
                              st.sampled_from(["Low", "Medium", "High"])),
                    min_size=1, max_size=8))
    def test_ranking_is_sorted(self, specs):
        reg = CardRegistry()
        for i, (acc, cx) in enumerate(specs):
            reg = register_card(reg, make_card(
                model_id=f"m{i}", performance_metrics={"Accuracy": acc},
                integration_complexity=cx))
        ranked = find_candidates(reg, FeatureRequirement(domain="Products"))
        keys = [(-c.normalized_accuracy(), int(c.complexity()), c.model_id, -c.version)
                for c in ranked]
        assert keys == sorted(keys)
        assert len(ranked) == len(specs)


class TestResourceFit:
    def test_reference_card_fits(self, tc001_card):
        assert check_resource_fit(tc001_card, ResourceAllocation(2, 4.0)).fits

    def test_violations_named(self, tc001_card):
        result = check_resource_fit(tc001_card, ResourceAllocation(1, 2.0))
        assert not result.fits
        assert sorted(v.split(":")[0] for v in result.violations) == ["cpu", "ram"]

    def test_gpu_violation(self):
        card = make_card(gpu="Required")
        result = check_resource_fit(card, ResourceAllocation(4, 8.0, gpu=False))
        assert result.violations == ("gpu: required but not allocated",)
        assert check_resource_fit(card, ResourceAllocation(4, 8.0, gpu=True)).fits

    @given(st.integers(min_value=0, max_value=16),
           st.floats(min_value=0.5, max_value=32))
    def test_fit_is_monotone(self, cpu, ram):
        card = make_card(cpu="4 CPU Cores", ram="8GB")
        fit = check_resource_fit(card, ResourceAllocation(cpu, ram)).fits
        assert fit == (cpu >= 4 and ram >= 8.0)
