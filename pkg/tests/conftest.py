import json
import random

import pytest

from archdd.model import ArchitectureSnapshot, Component


def snap(version, components):
    """Build a snapshot from {name: "e1 e2 ..."} mappings."""
    return ArchitectureSnapshot(
        version,
        tuple(
            Component(name, frozenset(entities.split()))
            for name, entities in sorted(components.items())
        ),
    )


def random_snapshot(rng: random.Random, version, pool, max_components=6, max_entities=10):
    """Random partition snapshot drawing entities from a shared pool."""
    n_components = rng.randint(2, max_components)
    available = list(pool)
    rng.shuffle(available)
    components = {}
    cursor = 0
    for index in range(n_components):
        size = rng.randint(1, max_entities)
        chunk = available[cursor:cursor + size]
        cursor += size
        if not chunk:
            chunk = [f"{version}.filler{index}"]
        components[f"comp{index:02d}"] = " ".join(chunk)
    return snap(version, components)


MINI_SNAPSHOT_A = """\
contain core app.core.Engine
contain core app.core.Scheduler
contain io app.io.Reader
contain web thirdparty.jetty.Server
"""

MINI_SNAPSHOT_B = """\
contain core app.core.Engine
contain core app.core.Scheduler
contain core app.core.Cache
contain io app.io.Reader
contain io app.util.Log
contain metrics app.metrics.Meter
contain web thirdparty.jetty.Server
contain web thirdparty.jetty.Http
"""

MINI_ISSUES = [
    {
        "id": "APP-1",
        "summary": "Cache compiled execution plans in the engine",
        "resolved": True,
        "merged": True,
        "versions": ["1.1.0"],
        "commits": ["c100"],
    },
    {
        "id": "APP-2",
        "summary": "Unify logging across engine and io layers",
        "resolved": True,
        "merged": True,
        "versions": ["1.1.0"],
        "commits": ["c200"],
    },
    {
        "id": "APP-3",
        "summary": "Expose runtime metrics endpoint",
        "resolved": True,
        "merged": True,
        "versions": ["1.1.0"],
        "commits": ["c300"],
    },
]

MINI_COMMITS = [
    {
        "id": "c100",
        "paths": ["src/main/java/app/core/Cache.java", "src/main/java/app/core/Engine.java"],
        "issue_keys": ["APP-1"],
    },
    {
        "id": "c200",
        "paths": ["src/main/java/app/core/Cache.java", "src/main/java/app/util/Log.java"],
        "issue_keys": ["APP-2"],
    },
    {
        "id": "c300",
        "paths": [
            "src/main/java/app/metrics/Meter.java",
            "src/main/java/thirdparty/jetty/Http.java",
            "docs/metrics.md",
        ],
        "issue_keys": ["APP-3"],
    },
]

MINI_EXCLUSIONS = "# imported namespaces treated as third party\nthirdparty.jetty\n"


def write_mini_project(root):
    """Write the two-version mini project; returns the config path.

    Hand-derived ledger (frozen before implementation): the unique optimal
    matching pairs core/io/web with themselves and a dummy with the new
    metrics component (total cost 4). Changes: core +app.core.Cache,
    io +app.util.Log, web +thirdparty.jetty.Http (excluded namespace),
    metrics added (+app.metrics.Meter). Decisions: one crosscutting
    {APP-1, APP-2} x {core, io} and one simple {APP-3} x {metrics}; the web
    change stays an orphan. Coverage 3/4 before cleanup, 3/3 after.
    """
    (root / "arch-1.0.0.rsf").write_text(MINI_SNAPSHOT_A, encoding="utf-8")
    (root / "arch-1.1.0.rsf").write_text(MINI_SNAPSHOT_B, encoding="utf-8")
    (root / "issues.jsonl").write_text(
        "".join(json.dumps(obj) + "\n" for obj in MINI_ISSUES), encoding="utf-8"
    )
    (root / "commits.jsonl").write_text(
        "".join(json.dumps(obj) + "\n" for obj in MINI_COMMITS), encoding="utf-8"
    )
    (root / "exclusions.txt").write_text(MINI_EXCLUSIONS, encoding="utf-8")
    config = {
        "versions": [
            {"label": "1.0.0", "snapshot": "arch-1.0.0.rsf"},
            {"label": "1.1.0", "snapshot": "arch-1.1.0.rsf"},
        ],
        "issues": "issues.jsonl",
        "commits": "commits.jsonl",
        "exclusions": "exclusions.txt",
        "output_dir": "out",
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return config_path


@pytest.fixture
def mini_project(tmp_path):
    return write_mini_project(tmp_path)
