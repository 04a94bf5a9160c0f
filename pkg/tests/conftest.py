"""Pytest configuration: project root on path (so 'src' imports work), load .env, isolate run output."""
from pathlib import Path
import sys

import pytest

# Add project root to sys.path so tests can "from src. ..." when run via pytest from project root or terminal
_project_root = Path(__file__).resolve().parents[1]
if str(_project_root) not in sys.path:
    sys.path.insert(0, str(_project_root))


def pytest_configure(config):
    try:
        from dotenv import load_dotenv
        env = _project_root / ".env"
        if env.exists():
            load_dotenv(env)
    except ImportError:
        pass


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point run output at a temp directory and rebuild settings for every test."""
    from src.utils.config import get_settings

    monkeypatch.setenv("MACE_RUNS_DIR", str(tmp_path / "runs"))
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def small_chain():
    from src.simulators.kinematics import KinematicChain

    return KinematicChain((1.0, 0.8, 0.6))
