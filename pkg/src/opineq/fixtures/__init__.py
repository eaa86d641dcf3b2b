"""Bundled instance files for the worked examples."""

from __future__ import annotations

import json
from importlib import resources


def fixture_names() -> list:
    return sorted(p.name for p in resources.files(__name__).iterdir() if p.name.endswith(".json"))


def fixture_path(name: str):
    """Path-like handle to a bundled fixture (``"witness_thm21.json"``)."""
    return resources.files(__name__).joinpath(name)


def load_fixture(name: str):
    from ..claims.instance import Instance

    return Instance.from_json(json.loads(fixture_path(name).read_text(encoding="utf-8")))
