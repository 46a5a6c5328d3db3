import pytest

from ctlevidence import fixtures


@pytest.fixture
def chain():
    return fixtures.chain()


@pytest.fixture
def loop():
    return fixtures.loop()


@pytest.fixture
def dead():
    return fixtures.dead()


@pytest.fixture
def game():
    return fixtures.game_board()
