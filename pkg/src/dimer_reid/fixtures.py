"""Bundled dimer models used by the examples and the test suite."""

from __future__ import annotations

from importlib import resources

from .model import DimerModel, parse_dimer

NAMES = ("one_vertex", "conifold", "hex_z3", "ten_vertex", "spp")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(NAMES)}")
    return resources.files("dimer_reid.data").joinpath(f"{name}.json").read_text()


def load_fixture(name: str) -> DimerModel:
    return parse_dimer(fixture_text(name))
