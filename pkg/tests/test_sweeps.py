import math
from fractions import Fraction

import numpy as np
import pytest

from dispersion import temporal
from dispersion.fd import cfl_max_fd
from figures.recipes import fd_spec, find_local_maxima, fit_order, run_figure
from figures.sweeps import (
    QUANTITY_NAMES,
    UNDEF,
    SchemeCase,
    SweepTable,
    cfl_row,
    omega_point,
    parallel_map,
    quantities_point,
    temporal_point,
)
from schemas.common import TemporalKind
from utils.errors import FitFailed, UnknownFigure


def test_fit_order_recovers_power_law():
    h = np.array([0.1, 0.05, 0.025, 0.0125])
    order, coefficient = fit_order(h, 3.0 * h**4)
    assert order == pytest.approx(4.0)
    assert coefficient == pytest.approx(3.0)


def test_fit_order_needs_two_points():
    with pytest.raises(FitFailed):
        fit_order([0.1, 0.05], [1e-3, float("nan")])


def test_find_local_maxima():
    x = np.linspace(0, 4, 9)
    y = np.array([0, 1, 0, 0, 2, 1, np.nan, 3, 0])
    assert find_local_maxima(x, y) == [0.5, 2.0, 3.5]
    assert find_local_maxima(x, y, window=(1.0, 3.0)) == [2.0]


def test_sweep_table_columns():
    table = SweepTable("t", ["w_hat", "k", "psi"], complex_columns=("k",))
    table.add_row({"w_hat": 0.5, "k": 1 + 2j, "psi": None})
    with pytest.raises(KeyError):
        table.add_row({"w_hat": 0.1, "bogus": 1.0})
    assert table.header == ["w_hat", "k_re", "k_im", "psi"]
    assert table.to_rows() == [{"w_hat": 0.5, "k_re": 1.0, "k_im": 2.0, "psi": UNDEF}]
    np.testing.assert_array_equal(table.column("k_im"), [2.0])
    assert math.isnan(table.column("psi")[0])


def test_parallel_map_keeps_order():
    items = [1.0, 4.0, 9.0, 16.0]
    assert parallel_map(math.sqrt, items, workers=1) == [1.0, 2.0, 3.0, 4.0]
    assert parallel_map(math.sqrt, items, workers=2) == [1.0, 2.0, 3.0, 4.0]


def test_cfl_rows():
    row = cfl_row(("fd", 2, None))
    assert row["order"] == 4
    assert row["exact"] == Fraction(6, 7)
    assert row["value"] == pytest.approx(6 / 7)
    assert cfl_row(("fd", 0, "inf"))["value"] == pytest.approx(2 / math.pi)
    dg_row = cfl_row(("dg", 0, "alt+"))
    assert dg_row["value"] == pytest.approx(1.0, abs=1e-5)
    assert dg_row["energy"] == pytest.approx(1.0)


def test_undefined_points_do_not_stop_a_sweep(medium):
    row = temporal_point(0.0, medium=medium, W1=0.1)
    assert row["psi_lf"] is None and row["psi_tp"] is None
    assert temporal_point(0.5, medium=medium, W1=0.1)["psi_lf"] > 0


def test_omega_point_at_zero_wavenumber(medium):
    row = omega_point(0.0, M=1, medium=medium, omega1_h=math.pi / 30)
    assert row["err_1"] is None
    row = omega_point(0.5, M=1, medium=medium, omega1_h=math.pi / 30)
    assert row["err_2"] > 0


def test_unknown_figure(medium):
    with pytest.raises(UnknownFigure):
        run_figure("fig99", medium)


@pytest.mark.slow
def test_temporal_figure_is_deterministic(medium, tmp_path):
    result = run_figure("fig1", medium, workers=1)
    first = result.write(tmp_path / "a")
    second = result.write(tmp_path / "b")
    assert len(first) == len(second) == 2 * len(result.tables)
    for a, b in zip(first, second):
        if a.suffix == ".csv":
            assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a" / "fig1_w1_pi30.csv").read_text().startswith("w_hat,psi_lf,psi_tp\n")

    peaks = result.summary["fig1_w1_pi30.psi_lf.peaks"]
    assert any(abs(p - 1.0) < 0.05 for p in peaks)
    assert any(abs(p - math.sqrt(7 / 3)) < 0.05 for p in peaks)
    assert result.summary["fig1_convergence.order"] == pytest.approx(2.0, abs=0.2)


def test_leapfrog_phase_error_has_two_peaks(medium):
    w_hat = np.linspace(0.5, 2.0, 1501)[1:-1]
    psi = [temporal.relative_phase_error(TemporalKind.LEAPFROG, medium, w, math.pi / 30) for w in w_hat]
    peaks = find_local_maxima(w_hat, psi)
    assert len(peaks) == 2
    assert peaks[0] == pytest.approx(1.0, abs=0.05)
    assert peaks[1] == pytest.approx(math.sqrt(7 / 3), abs=0.05)


@pytest.mark.slow
def test_fully_discrete_fd_phase_error_has_two_peaks(medium):
    result = run_figure("fig4", medium, workers=1)
    for temporal_kind in ("lf", "tp"):
        peaks = result.summary[f"fig4_{temporal_kind}.psi_fd4.peaks"]
        assert len(peaks) == 2
        assert peaks[0] == pytest.approx(1.0, abs=0.05)
        assert peaks[1] == pytest.approx(math.sqrt(7 / 3), abs=0.05)


def test_low_order_wins_only_with_strong_loss(medium):
    summary = run_figure("fig3", medium, workers=1).summary
    assert summary["fig3_gamma_0.high_order_wins"]
    assert summary["fig3_gamma_0.01.high_order_wins"]
    assert not summary["fig3_gamma_0.1.high_order_wins"]
    assert not summary["fig3_gamma_1.high_order_wins"]


def test_quantities_insensitive_to_order_where_permittivity_vanishes(medium):
    w1 = math.pi / 30
    cases = []
    for M in (2, 3):
        nu = 0.7 * cfl_max_fd(M)
        omega1_h = w1 / (math.sqrt(medium.eps_inf) * nu)
        cases.append(SchemeCase(f"fd{2 * M}", fd_spec(TemporalKind.LEAPFROG, M), w1, omega1_h))
    row = quantities_point(math.sqrt(7 / 3), cases=cases, medium=medium)
    compared = 0
    for name in QUANTITY_NAMES:
        fd4, fd6 = row[f"{name}_fd4"], row[f"{name}_fd6"]
        if fd4 is None or fd6 is None:
            continue
        assert fd6 == pytest.approx(fd4, rel=0.02)
        compared += 1
    assert compared >= 2
