import math

import numpy as np
import pytest

from su11squeeze import _kernels_py, scan
from su11squeeze.hamiltonian import CouplingParams
from su11squeeze.pcs import initial_factors_exact
from su11squeeze.scan import (
    BOUNDARY,
    MASK_ERROR,
    NONFINITE,
    OK,
    OVERFLOW,
    SQUEEZED,
    TRUNCATION,
    UNSQUEEZED,
    Axis,
    GridSpec,
    Profile,
    RegionMap,
)


def pcs_grid(steps=21, **kw):
    return GridSpec(Axis("r", -3.0, 3.0, steps), Axis("phi", 0.0, 2 * math.pi, steps), "pcs", **kw)


class TestGridSpec:
    def test_axis_inclusive(self):
        v = Axis("phi", 0.0, 2 * math.pi, 5).values()
        assert v[0] == 0.0 and v[-1] == 2 * math.pi and len(v) == 5

    @pytest.mark.parametrize("lo, hi, steps", [(0.0, 1.0, 1), (1.0, 1.0, 5), (2.0, 1.0, 5)])
    def test_axis_rejects(self, lo, hi, steps):
        with pytest.raises(ValueError):
            Axis("r", lo, hi, steps)

    def test_family_axes(self):
        with pytest.raises(ValueError):
            GridSpec(Axis("zmag", 0, 1, 3), Axis("phi", 0, 1, 3), "pcs")
        with pytest.raises(ValueError):
            GridSpec(Axis("r", 0, 1, 3), Axis("phi", 0, 1, 3), "squeezed")
        with pytest.raises(ValueError):
            GridSpec(Axis("r", 0, 1, 3), Axis("phi", 0, 1, 3), "pcs", time_unit="s")

    def test_axes_in_either_order(self):
        a = scan.scan_plane(pcs_grid(11, omega=3.0, time=0.3), "transport")
        swapped = GridSpec(a.grid.axis2, a.grid.axis1, "pcs", omega=3.0, time=0.3)
        b = scan.scan_plane(swapped, "transport")
        np.testing.assert_array_equal(a.fx, b.fx.T)

    @pytest.mark.parametrize(
        "unit, expected",
        [("t", 1.2), ("tl", 1.2 / 2.0), ("tw", 1.2 / 3.0), ("gt", 1.2 / math.sqrt(5.0))],
    )
    def test_time_units(self, unit, expected):
        assert scan.physical_time(1.2, unit, CouplingParams(3.0, 2.0)) == pytest.approx(expected, rel=1e-15)

    def test_time_unit_undefined(self):
        with pytest.raises(ValueError):
            scan.physical_time(1.0, "tl", CouplingParams(1.0, 0.0))
        assert scan.physical_time(0.0, "gt", CouplingParams(1.0, 1.0)) == 0.0

    def test_as_dict(self):
        d = pcs_grid(5, omega=3.0).as_dict()
        assert d["family"] == "pcs"
        assert d["axis1"] == {"name": "r", "min": -3.0, "max": 3.0, "steps": 5}
        assert d["fixed"] == {"k": 0.5, "omega": 3.0, "lambda": 1.0, "time": 0.0, "time_unit": "t"}


class TestMasks:
    def test_categories(self):
        f = np.array([-1.0, -1e-12, 0.0, 1e-12, 2.0, np.nan, np.inf])
        m = scan.sign_mask(f)
        assert list(m) == [SQUEEZED, BOUNDARY, BOUNDARY, BOUNDARY, UNSQUEEZED, MASK_ERROR, MASK_ERROR]

    def test_zero_crossings(self):
        x = np.linspace(0, 2 * np.pi, 401)
        c = scan.zero_crossings(x, np.cos(x))
        np.testing.assert_allclose(c, [np.pi / 2, 3 * np.pi / 2], atol=1e-4)
        assert scan.zero_crossings(x, np.full_like(x, np.nan)) == []


class TestContours:
    def test_circle_is_one_closed_loop(self):
        a = np.linspace(-2, 2, 81)
        x, y = np.meshgrid(a, a, indexing="ij")
        lines = scan.zero_contours(x**2 + y**2 - 1.0, a, a)
        assert len(lines) == 1
        loop = lines[0]
        np.testing.assert_array_equal(loop[0], loop[-1])
        radius = np.hypot(loop[:, 0], loop[:, 1])
        assert np.max(np.abs(radius - 1.0)) < 2e-3

    def test_open_chain_hits_border(self):
        a = np.linspace(0, 1, 11)
        x, y = np.meshgrid(a, a, indexing="ij")
        (line,) = scan.zero_contours(x - 0.55, a, a)
        np.testing.assert_allclose(line[:, 0], 0.55, atol=1e-12)
        assert {line[0, 1], line[-1, 1]} == {0.0, 1.0}

    def test_empty(self):
        a = np.linspace(0, 1, 5)
        assert scan.zero_contours(np.ones((5, 5)), a, a) == []

    def test_nan_cells_skipped(self):
        a = np.linspace(-2, 2, 41)
        x, y = np.meshgrid(a, a, indexing="ij")
        f = x**2 + y**2 - 1.0
        f[20, 20] = np.nan
        lines = scan.zero_contours(f, a, a)
        assert sum(len(line) for line in lines) > 0

    def test_backend_parity(self, backend, rng):
        f = rng.normal(size=(30, 25))
        f[3, 4] = np.nan
        np.testing.assert_array_equal(backend.marching_segments(f), _kernels_py.marching_segments(f))

    def test_contours_follow_field(self):
        m = scan.figure(1)
        r = np.concatenate([line[:, 0] for line in m.contours_x])
        phi = np.concatenate([line[:, 1] for line in m.contours_x])
        fx, _ = initial_factors_exact(r, phi)
        assert np.max(np.abs(fx)) < 0.05


class TestEvaluate:
    def test_unknown_path(self):
        with pytest.raises(ValueError):
            scan.evaluate_points(pcs_grid(3), "weak", np.zeros(2), np.zeros(2))

    def test_overflow_is_flagged(self):
        g = GridSpec(Axis("r", 0, 1, 3), Axis("phi", 0, 1, 3), "pcs", omega=1.0, lambda_=2.0, time=400.0, time_unit="gt")
        fx, fy, code = scan.evaluate_grid(g, "transport")
        assert np.all(code == OVERFLOW) and np.all(np.isnan(fx))

    def test_oracle_errors_are_per_point(self):
        g = GridSpec(Axis("r", 0, 2.5, 6), Axis("phi", 0, 6, 2), "pcs", omega=1.0, lambda_=2.0, time=2.5, time_unit="gt")
        fx, fy, code = scan.evaluate_grid(g, "oracle")
        assert np.all(code[0] == OK) and np.all(code[-1] == TRUNCATION)
        assert set(np.unique(code)) == {OK, TRUNCATION}
        assert np.all(np.isfinite(fx[code == OK])) and np.all(np.isnan(fx[code != OK]))
        m = scan.scan_plane(g, "oracle")
        assert np.all((m.sign_mask_x == MASK_ERROR) == (code != OK))

    def test_nonfinite_is_flagged(self):
        # a NaN phase stands in for any non-finite evaluation
        g = GridSpec(Axis("zmag", 0, 1, 3), Axis("phi", 0, 1, 3), "bgcs", omega=3.0, time=0.5)
        fx, fy, code = scan.evaluate_points(g, "transport", np.array([1.0, 1.0]), np.array([0.2, np.nan]))
        assert list(code) == [OK, NONFINITE]

    def test_oracle_limit(self):
        with pytest.raises(ValueError):
            scan.evaluate_grid(pcs_grid(65), "oracle")

    def test_oracle_matches_transport(self):
        g = GridSpec(Axis("zmag", 0, 2, 5), Axis("phi", 0, 2 * math.pi, 5), "bgcs", omega=3.0, time=1.0, time_unit="tl")
        a = scan.evaluate_grid(g, "oracle")
        b = scan.evaluate_grid(g, "transport")
        np.testing.assert_allclose(a[0], b[0], atol=1e-9)
        np.testing.assert_allclose(a[1], b[1], atol=1e-9)

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            scan.profile(pcs_grid(5), "transport", "phi", 1.0)


class TestFigures:
    def test_shapes_and_types(self):
        for n in range(1, 10):
            out = scan.figure(n, steps=11)
            if n == 7:
                assert isinstance(out, Profile) and out.fixed_value == scan.FIG7_ZMAG
            else:
                assert isinstance(out, RegionMap) and out.fx.shape == (11, 11)

    def test_bad_number(self):
        with pytest.raises(ValueError):
            scan.preset_grid(10)

    def test_oracle_steps_default(self):
        assert scan.preset_grid(1, 64).shape == (64, 64)
        out = scan.figure(9, "oracle", steps=6)
        assert np.all(out.error_code == OK)

    @pytest.mark.parametrize(
        "n, area_x, area_y",
        [(1, 0.357, 0.362), (2, 0.243, 0.456), (3, 0.363, 0.363), (4, 0.102, 0.0094), (6, 0.551, 0.390)],
    )
    def test_preset_areas(self, n, area_x, area_y):
        m = scan.figure(n)
        assert np.mean(m.sign_mask_x == SQUEEZED) == pytest.approx(area_x, abs=1e-3)
        assert np.mean(m.sign_mask_y == SQUEEZED) == pytest.approx(area_y, abs=1e-3)

    def test_weak_coupling_moves_x_region(self):
        a0 = np.mean(scan.figure(1).sign_mask_x == SQUEEZED)
        assert np.mean(scan.figure(2).sign_mask_x == SQUEEZED) < a0

    def test_strong_coupling_shrinks_both(self):
        m1, m4 = scan.figure(1), scan.figure(4)
        assert np.mean(m4.sign_mask_x == SQUEEZED) < np.mean(m1.sign_mask_x == SQUEEZED)
        assert np.mean(m4.sign_mask_y == SQUEEZED) < np.mean(m4.sign_mask_x == SQUEEZED)

    def test_fig1_interval_next_to_vacuum(self):
        m = scan.figure(1)
        i = int(np.argmin(np.abs(m.axis1 - 0.03)))
        inside = m.sign_mask_x[i] == SQUEEZED
        # endpoints sit midway between the nodes where the mask flips
        flips = np.flatnonzero(inside[1:] != inside[:-1])
        ends = 0.5 * (m.axis2[flips] + m.axis2[flips + 1])
        step = m.axis2[1] - m.axis2[0]
        np.testing.assert_allclose(ends[:2], [np.pi / 4, 3 * np.pi / 4], atol=step)

    def test_fig7_profile(self):
        p = scan.figure(7)
        assert min(np.nanmin(p.fx), np.nanmin(p.fy)) == pytest.approx(-0.5, abs=0.02)
        assert len(p.crossings_x) >= 2
