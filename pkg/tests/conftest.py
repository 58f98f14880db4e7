"""Shared fixtures: fixture loading and random network generators."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from entnet.netmodel import Link, NetworkSpec, load_network, validate

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def fixture_path(name: str) -> str:
    return str(FIXTURE_DIR / name)


@pytest.fixture
def load_fixture():
    return lambda name: load_network(fixture_path(name))


def _random_link(rng, kind: str, n: int, max_ghz_arity: int, max_multiplicity: int,
                 pi4: bool, angle_lo: float) -> Link:
    if kind == "gen_ghz":
        arity = int(rng.integers(2, min(max_ghz_arity, n) + 1))
    elif kind == "w_state":
        arity = 3
    else:
        arity = 2
    endpoints = tuple(int(x) for x in rng.choice(n, size=arity, replace=False))
    mult = int(rng.integers(1, max_multiplicity + 1))
    if kind in ("gen_epr", "gen_ghz", "reduced_ghz"):
        angle = math.pi / 4 if pi4 else float(rng.uniform(angle_lo, math.pi / 2 - angle_lo))
        return Link(kind, endpoints, mult, angle)
    if kind == "schmidt":
        d = int(rng.integers(2, 5))
        raw = rng.random(d) + 0.05
        coeffs = tuple(float(c) for c in raw / raw.sum())
        return Link(kind, endpoints, mult, None, coeffs)
    return Link(kind, endpoints, mult)


def random_network(
    rng,
    *,
    max_parties: int = 10,
    max_groups: int = 12,
    kinds: tuple[str, ...] = ("gen_epr", "gen_ghz"),
    max_ghz_arity: int = 4,
    max_multiplicity: int = 3,
    pi4: bool = False,
    angle_lo: float = 0.1,
    name: str = "random",
) -> NetworkSpec:
    n = int(rng.integers(2, max_parties + 1))
    usable = tuple(k for k in kinds if k != "w_state" or n >= 3)
    links = []
    for _ in range(int(rng.integers(1, max_groups + 1))):
        kind = str(rng.choice(usable))
        links.append(_random_link(rng, kind, n, max_ghz_arity, max_multiplicity, pi4, angle_lo))
    spec = NetworkSpec(name, tuple(f"p{i}" for i in range(n)), tuple(links))
    assert not validate(spec)
    return spec


def random_capped_network(
    rng,
    *,
    qubit_cap: int = 12,
    max_parties: int = 5,
    kinds: tuple[str, ...] = ("gen_epr", "gen_ghz"),
    max_ghz_arity: int = 4,
    max_multiplicity: int = 2,
    pi4: bool = False,
    angle_lo: float = 0.1,
    name: str = "random-small",
) -> NetworkSpec:
    """Random network whose dense representation fits the oracle budget."""
    n = int(rng.integers(2, max_parties + 1))
    usable = tuple(k for k in kinds if k != "w_state" or n >= 3)
    links: list[Link] = []
    budget = qubit_cap
    for _ in range(16):
        kind = str(rng.choice(usable))
        link = _random_link(rng, kind, n, max_ghz_arity, max_multiplicity, pi4, angle_lo)
        need = link.qubits_per_instance() * link.multiplicity
        if need <= budget:
            links.append(link)
            budget -= need
        if budget < 2:
            break
    if not links:
        theta = math.pi / 4 if pi4 else float(rng.uniform(angle_lo, math.pi / 2 - angle_lo))
        links.append(Link("gen_epr", (0, 1), 1, theta))
    spec = NetworkSpec(name, tuple(f"p{i}" for i in range(n)), tuple(links))
    assert not validate(spec)
    return spec


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
