import pytest
from hypothesis import settings

settings.register_profile("deterministic", derandomize=True, max_examples=50)
settings.load_profile("deterministic")

DEFAULT_SEED = 20240811


def pytest_addoption(parser):
    parser.addoption(
        "--seed", type=int, default=DEFAULT_SEED,
        help="seed for the randomized property tests (fixed by default)",
    )


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")
