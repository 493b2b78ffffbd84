"""Rendering tests on hand-built CSV inputs."""

import pytest

from hoaxnet_figures import FigureDataError, FigureJob, draw, load_figure_data, render

SWEEP_HEADER = (
    "family,f0,h00,h01,h11,p,alpha,beta,p_verify,p_forget,steps,iterations,seed,"
    "mean_believers_global,std_believers_global,"
    "mean_believers_minority,std_believers_minority,"
    "mean_believers_majority,std_believers_majority"
)


def er_row(p, alpha, mean, std):
    return (
        f"er,,,,,{p},{alpha},0.5,0.05,0.1,100,5,42,{mean},{std},,,{mean},{std}"
    )


def sbm_row(f0, h00, h11, mean, std):
    return (
        f"sbm,{f0},{h00},0.002,{h11},,0.3,0.5,0.05,0.1,100,5,42,"
        f"{mean},{std},0.2,0.01,{mean},{std}"
    )


@pytest.fixture
def density_csv(tmp_path):
    lines = [SWEEP_HEADER]
    for alpha in (0.1, 0.3):
        for i, p in enumerate((0.002, 0.004, 0.008)):
            lines.append(er_row(p, alpha, 0.1 * (i + 1) * alpha, 0.01))
    path = tmp_path / "density.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def panels_csv(tmp_path):
    lines = [SWEEP_HEADER]
    for f0 in (0.1, 0.2, 0.3):
        for h11 in (0.004, 0.007, 0.010):
            for i, h00 in enumerate((0.01, 0.04, 0.10)):
                lines.append(sbm_row(f0, h00, h11, 0.02 * (i + 1) + h11, 0.005))
    path = tmp_path / "panels.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def timeseries_csv(tmp_path):
    lines = ["p,t,mean_believers"]
    for p in (0.002, 0.004):
        for t in range(4):
            lines.append(f"{p},{t},{0.01 * (t + 1) + p}")
    path = tmp_path / "ts.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


class TestLoadFigureData:
    def test_density_kind_groups_by_alpha(self, density_csv, tmp_path):
        job = FigureJob("believers-vs-density-by-alpha", density_csv, tmp_path / "o.pdf")
        data = load_figure_data(job)
        assert len(data.panels) == 1
        series = data.panels[0].series
        assert [s.label for s in series] == ["alpha=0.1", "alpha=0.3"]
        # values equal the CSV values exactly
        assert series[0].x == [0.002, 0.004, 0.008]
        assert series[1].y == pytest.approx([0.03, 0.06, 0.09])
        assert series[0].yerr == [0.01, 0.01, 0.01]

    def test_panels_kind_one_panel_per_f0(self, panels_csv, tmp_path):
        job = FigureJob(
            "majority-believers-vs-h00-panels", panels_csv, tmp_path / "o.pdf"
        )
        data = load_figure_data(job)
        assert [p.title for p in data.panels] == ["f0=0.1", "f0=0.2", "f0=0.3"]
        for panel in data.panels:
            assert [s.label for s in panel.series] == [
                "h11=0.004", "h11=0.007", "h11=0.01",
            ]
            for series in panel.series:
                assert series.x == [0.01, 0.04, 0.10]

    def test_timeseries_kind_one_line_per_p(self, timeseries_csv, tmp_path):
        job = FigureJob("timeseries-by-density", timeseries_csv, tmp_path / "o.pdf")
        data = load_figure_data(job)
        series = data.panels[0].series
        assert [s.label for s in series] == ["p=0.002", "p=0.004"]
        assert series[0].x == [0, 1, 2, 3]
        assert series[0].y == pytest.approx([0.012, 0.022, 0.032, 0.042])

    def test_timeseries_without_p_column(self, tmp_path):
        path = tmp_path / "single.csv"
        path.write_text("t,mean_believers\n0,0.5\n1,0.25\n")
        data = load_figure_data(
            FigureJob("timeseries-by-density", path, tmp_path / "o.pdf")
        )
        assert len(data.panels[0].series) == 1
        assert data.panels[0].series[0].y == [0.5, 0.25]

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("p,alpha,mean_believers_global\n0.1,0.3,0.5\n")
        with pytest.raises(FigureDataError, match="std_believers_global"):
            load_figure_data(
                FigureJob("believers-vs-density-by-alpha", path, tmp_path / "o.pdf")
            )

    def test_header_only_is_error(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(SWEEP_HEADER + "\n")
        with pytest.raises(FigureDataError, match="no data rows"):
            load_figure_data(
                FigureJob("believers-vs-density-by-alpha", path, tmp_path / "o.pdf")
            )

    def test_all_empty_required_column_is_error(self, tmp_path):
        path = tmp_path / "blank.csv"
        path.write_text(SWEEP_HEADER + "\n" + "er,,,,,,0.3,0.5,0.05,0.1,1,1,0,,,,,,\n")
        with pytest.raises(FigureDataError, match="no values"):
            load_figure_data(
                FigureJob("believers-vs-density-by-alpha", path, tmp_path / "o.pdf")
            )

    def test_unknown_kind_rejected(self, density_csv, tmp_path):
        with pytest.raises(FigureDataError, match="unknown figure kind"):
            FigureJob("pie-chart", density_csv, tmp_path / "o.pdf")


class TestRender:
    def test_writes_vector_and_raster(self, density_csv, tmp_path):
        for name in ("out.pdf", "out.svg", "out.png"):
            target = tmp_path / name
            render(FigureJob("believers-vs-density-by-alpha", density_csv, target))
            assert target.exists() and target.stat().st_size > 0

    def test_no_file_on_bad_input(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(SWEEP_HEADER + "\n")
        target = tmp_path / "out.pdf"
        with pytest.raises(FigureDataError):
            render(FigureJob("believers-vs-density-by-alpha", path, target))
        assert not target.exists()

    def test_single_row_renders(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text(SWEEP_HEADER + "\n" + er_row(0.01, 0.3, 0.2, 0.05) + "\n")
        target = tmp_path / "one.pdf"
        render(FigureJob("believers-vs-density-by-alpha", path, target))
        assert target.exists()

    def test_panel_figure_structure(self, panels_csv, tmp_path):
        data = load_figure_data(
            FigureJob("majority-believers-vs-h00-panels", panels_csv, tmp_path / "o.pdf")
        )
        fig = draw(data)
        try:
            assert len(fig.axes) == 3
            for ax in fig.axes:
                assert len(ax.containers) == 3  # one errorbar container per h11
                assert ax.get_xlabel() == "h00"
            assert "% believers" in fig.axes[0].get_ylabel()
        finally:
            import matplotlib.pyplot as plt

            plt.close(fig)

    def test_rendering_pure_wrt_csv(self, density_csv, tmp_path):
        job = FigureJob("believers-vs-density-by-alpha", density_csv, tmp_path / "a.pdf")
        first = load_figure_data(job)
        second = load_figure_data(job)
        assert first == second


class TestCli:
    def test_cli_renders(self, density_csv, tmp_path):
        from hoaxnet_figures.cli import main

        out = tmp_path / "cli.pdf"
        assert main(["believers-vs-density-by-alpha", str(density_csv), str(out)]) == 0
        assert out.exists()

    def test_cli_bad_kind_usage_error(self, density_csv, tmp_path):
        from hoaxnet_figures.cli import main

        assert main(["nope", str(density_csv), str(tmp_path / "x.pdf")]) == 2

    def test_cli_empty_csv_nonzero_no_file(self, tmp_path, capsys):
        from hoaxnet_figures.cli import main

        path = tmp_path / "empty.csv"
        path.write_text(SWEEP_HEADER + "\n")
        out = tmp_path / "x.pdf"
        assert main(["believers-vs-density-by-alpha", str(path), str(out)]) == 1
        assert not out.exists()
        assert "no data rows" in capsys.readouterr().err
