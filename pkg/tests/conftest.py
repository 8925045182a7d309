import json
from pathlib import Path

import pytest

from mlspl.configuration import config_from_dict
from mlspl.fm_dsl import parse_feature_model
from mlspl.model_cards import CardRegistry, card_from_dict, register_card
from mlspl.monitoring import monitor_spec_from_dict
from mlspl.replacement import strategy_from_dict

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def store_model():
    return parse_feature_model((FIXTURES / "store.fm").read_text())


@pytest.fixture
def tc001_card():
    return card_from_dict(json.loads((FIXTURES / "tc001_card.json").read_text()))


@pytest.fixture
def tc001_registry(tc001_card):
    return register_card(CardRegistry(), tc001_card)


@pytest.fixture
def tc001_monitor():
    return monitor_spec_from_dict(json.loads((FIXTURES / "tc001_monitor.json").read_text()))


@pytest.fixture
def tc001_strategy():
    return strategy_from_dict(json.loads((FIXTURES / "tc001_strategy.json").read_text()))


@pytest.fixture
def product_config():
    return config_from_dict(json.loads((FIXTURES / "product_config.json").read_text()))
