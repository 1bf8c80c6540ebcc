import json
import os
import subprocess
import sys

import pytest


@pytest.fixture
def write_config(tmp_path):
    """Dump a config dict to a JSON file and return its path."""

    def _write(obj, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def run_cli(tmp_path):
    """Run the installed CLI in a subprocess, returning CompletedProcess."""

    def _run(*args, env_extra=None):
        env = dict(os.environ)
        if env_extra:
            env.update(env_extra)
        return subprocess.run(
            [sys.executable, "-m", "phidim.cli", *args],
            capture_output=True,
            text=True,
            cwd=str(tmp_path),
            env=env,
        )

    return _run
