"""Shared fixtures: benchmark plant and controllers built once per session."""

import pytest

from rolldamp.baselines import design_lqr, notch_controller
from rolldamp.ouc import BENCHMARK_WEIGHTS, synthesize
from rolldamp.vessel import (assemble_plant, benchmark_autopilot,
                             benchmark_vessel, realize_plant)


@pytest.fixture(scope="session")
def plant():
    return assemble_plant(benchmark_vessel(), benchmark_autopilot())


@pytest.fixture(scope="session")
def plant_ss(plant):
    return realize_plant(plant)


@pytest.fixture(scope="session")
def controller(plant):
    return synthesize(plant, BENCHMARK_WEIGHTS, [1.15])


@pytest.fixture(scope="session")
def lqr(plant_ss):
    return design_lqr(plant_ss)


@pytest.fixture(scope="session")
def notch():
    return notch_controller()
