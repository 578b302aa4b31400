"""Shared test fixtures."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from eh_vortices.core.models import CaseTag, CorrectionSource, GridSpec, SolutionParams
from eh_vortices.solutions import build_solution

GOLDEN_DIR = Path(__file__).parent / "golden"

# 30 cells over [-4, 4] keep the RingA t=0 zero set off the lattice vertices.
SMALL_GRID = GridSpec.cube(4.0, 30)

EMPTY_FRAME = {"time": 0.0, "curves": [], "config": {}}


@pytest.fixture
def ring_params():
    return SolutionParams(case=CaseTag.RING_A, a=Fraction(1))


@pytest.fixture
def pair_params():
    return SolutionParams(case=CaseTag.PAIR_B, a=Fraction(1))


@pytest.fixture
def tabulated_ring_params():
    return SolutionParams(case=CaseTag.RING_A, a=Fraction(1), source=CorrectionSource.TABULATED)


@pytest.fixture
def classical_ring(ring_params):
    return build_solution(ring_params, quantum=False)


@pytest.fixture
def classical_pair(pair_params):
    return build_solution(pair_params, quantum=False)


@pytest.fixture
def small_grid():
    return SMALL_GRID


@pytest.fixture
def empty_frame_file(tmp_path):
    path = tmp_path / "frame_empty.json"
    path.write_text(json.dumps(EMPTY_FRAME), encoding="utf-8")
    return path
