"""Tests for core data models."""

import json
from dataclasses import fields
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from eh_vortices.config import load_run_config
from eh_vortices.core.models import (
    CaseTag,
    ComponentMetrics,
    CorrectionSource,
    GridSpec,
    RunConfig,
    SolutionParams,
    TopologyReport,
    VortexCurve,
)
from eh_vortices.exceptions import ParameterError


class TestGridSpec:
    def test_cube(self):
        grid = GridSpec.cube(2.0, 8)
        assert grid.bounds == ((-2.0, 2.0),) * 3
        assert grid.spacing == pytest.approx((0.5, 0.5, 0.5))
        assert grid.cell_diagonal == pytest.approx(0.5 * np.sqrt(3.0))

    def test_axes_include_both_ends(self):
        x, y, z = GridSpec.cube(1.0, 8).axes()
        assert len(x) == 9
        assert x[0] == -1.0
        assert x[-1] == 1.0

    def test_shifted_moves_half_a_cell(self):
        grid = GridSpec.cube(1.0, 8).shifted()
        assert grid.offset == (0.5, 0.5, 0.5)
        assert grid.axes()[0][0] == pytest.approx(-1.0 + 0.125)

    def test_refined(self):
        grid = GridSpec.cube(1.0, 8).refined()
        assert grid.resolution == (16, 16, 16)
        assert grid.min_spacing == pytest.approx(0.125)

    def test_mesh_is_ij_indexed(self):
        x, y, _ = GridSpec.cube(1.0, 8).mesh()
        assert x.shape == (9, 9, 9)
        assert x[1, 0, 0] > x[0, 0, 0]
        assert y[0, 1, 0] > y[0, 0, 0]

    def test_rejects_coarse_resolution(self):
        with pytest.raises(ParameterError, match="resolution"):
            GridSpec.cube(1.0, 4)

    def test_rejects_empty_interval(self):
        with pytest.raises(ParameterError, match="lower bound"):
            GridSpec(bounds=((1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)))

    def test_to_dict(self):
        assert GridSpec.cube(1.0, 8).to_dict()["resolution"] == [8, 8, 8]


class TestSolutionParams:
    def test_lambda_follows_coupling(self):
        params = SolutionParams(alpha=0.1, m=1.0, coupling_scale=2.0)
        assert params.lam == pytest.approx(4 * 0.01 / 45)

    def test_rejects_negative_scale(self):
        with pytest.raises(ParameterError, match="positive"):
            SolutionParams(a=Fraction(-1, 2))


class TestTopologyReport:
    def test_counts(self):
        ring = ComponentMetrics(True, 1.0, 0.0, 6.28, 40)
        arc = ComponentMetrics(False, 0.0, 0.0, 2.0, 10)
        report = TopologyReport(time=0.0, components=[arc, ring])
        assert report.component_count == 2
        assert report.open_count == 1
        assert report.largest() is ring


class TestVortexCurve:
    def test_to_dict(self):
        curve = VortexCurve(np.zeros((2, 3)), closed=False, component_id=3)
        assert len(curve) == 2
        assert curve.to_dict() == {
            "closed": False,
            "component_id": 3,
            "points": [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        }


class TestRunConfig:
    def test_times(self):
        config = RunConfig(t_start=0.0, t_end=1.0, frames=3)
        np.testing.assert_allclose(config.times(), [0.0, 0.5, 1.0])

    def test_to_dict_echoes_physics(self):
        config = RunConfig(case=CaseTag.PAIR_B, a=Fraction(3, 2), quantum=False)
        echo = config.to_dict()
        assert echo["case"] == "b"
        assert echo["a"] == "3/2"
        assert echo["effective_alpha"] == 0.0
        assert echo["lambda"] == 0.0
        assert echo["grid"]["resolution"] == [48, 48, 48]

    def test_to_dict_reads_back_every_field(self):
        config = RunConfig(
            command="track",
            case=CaseTag.PAIR_B,
            quantum=False,
            a=Fraction(3, 2),
            m=2.0,
            alpha=0.2,
            coupling_scale=4.0,
            source=CorrectionSource.TABULATED,
            grid=GridSpec(
                bounds=((-1.0, 1.0), (-2.0, 0.5), (-3.0, 3.0)),
                resolution=(8, 10, 12),
                offset=(0.5, 0.5, 0.5),
            ),
            t_start=-1.0,
            t_end=1.0,
            frames=3,
            dt=0.02,
            output_dir=Path("runs/pair"),
            workers=3,
            refine=True,
            mutate="beta.x:1/1000",
            dump_dir=Path("runs/poly"),
            camera="pair-side",
            overlay=True,
            inputs=(Path("a.json"), Path("b.json")),
            levels=2,
            log_file=Path("runs/track.log"),
            first_order_square=True,
        )
        echo = json.loads(json.dumps(config.to_dict()))
        assert {f.name for f in fields(RunConfig)} <= set(echo)
        assert load_run_config(echo) == config

    def test_unset_paths_echo_as_null(self):
        echo = RunConfig().to_dict()
        assert echo["dump_dir"] is None
        assert echo["log_file"] is None
        assert echo["inputs"] == []
        assert echo["output_dir"] == "out"
