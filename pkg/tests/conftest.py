import pytest

from gameflow import fixtures
from gameflow.data import load_model, parse_game_bundle
from gameflow.process import MatchContext, replay


@pytest.fixture(scope="session")
def chiba_model():
    return load_model(fixtures.path("chiba_model.json"))


@pytest.fixture(scope="session")
def tfs_table():
    return fixtures.tfs_table()


@pytest.fixture(scope="session")
def ryukyu_game():
    return parse_game_bundle(fixtures.path("chiba_ryukyu"), "Chiba")[0]


@pytest.fixture(scope="session")
def tokyo_game():
    return parse_game_bundle(fixtures.path("chiba_tokyo"), "Chiba")[0]


@pytest.fixture(scope="session")
def ryukyu_path(chiba_model, tfs_table, ryukyu_game):
    ctx = MatchContext(chiba_model, opponent_tfs=tfs_table["Ryukyu"])
    return replay(ctx, ryukyu_game)


@pytest.fixture(scope="session")
def tokyo_path(chiba_model, tfs_table, tokyo_game):
    ctx = MatchContext(chiba_model, opponent_tfs=tfs_table["Tokyo"])
    return replay(ctx, tokyo_game)
