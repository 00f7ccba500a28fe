import hashlib
import subprocess
import sys

import pytest

from mcfigures import (
    ColumnError,
    FigureSpec,
    drive_parity,
    normalised_drive,
    order_of,
    read_columns,
    render,
)

HEADER2 = "t,z1,z2,zhat1,zhat2,s,sfn,bound_lo,bound_hi,xi,v,u,G"


def flat_csv(path, rows=60, dt=0.05):
    lines = [HEADER2]
    for k in range(rows):
        t = k * dt
        lines.append(f"{t},0,0,0,0,0,0,-1,1,0,0,0,1")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture(scope="session")
def finite_csv(tmp_path_factory):
    """A real run produced through the public CLI of the simulation package."""
    out = tmp_path_factory.mktemp("finite_run")
    proc = subprocess.run(
        [sys.executable, "-m", "mccontrol", "run", "finite", "--out", str(out)],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert (out / "finite.csv").exists(), proc.stdout + proc.stderr
    return out / "finite.csv"


@pytest.fixture(scope="session")
def hofixed_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("hofixed_run")
    subprocess.run(
        [sys.executable, "-m", "mccontrol", "run", "hofixed", "--out", str(out),
         "--horizon", "1.5"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert (out / "hofixed.csv").exists()
    return out / "hofixed.csv"


class TestReadColumns:
    def test_degenerate_file_parses(self, tmp_path):
        cols = read_columns(flat_csv(tmp_path / "flat.csv"))
        assert order_of(cols) == 2
        assert cols["z1"].shape == (60,)

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,z1,z2\n0,0,0\n0.1,0,0\n0.2,0,0\n")
        with pytest.raises(ColumnError, match="zhat1"):
            read_columns(path)

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ColumnError):
            read_columns(path)


class TestRenderDegenerate:
    def test_flat_lines_render_and_input_is_zero(self, tmp_path):
        csv_path = flat_csv(tmp_path / "flat.csv")
        spec = FigureSpec("finite", str(csv_path), str(tmp_path / "fig"))
        written = render(spec)
        # four panels, PNG + SVG each
        assert len(written) == 8
        assert all(p.exists() and p.stat().st_size > 0 for p in written)
        cols = read_columns(csv_path)
        assert abs(normalised_drive(cols)).max() == 0.0

    def test_render_is_read_only(self, tmp_path):
        csv_path = flat_csv(tmp_path / "flat.csv")
        before = hashlib.sha256(csv_path.read_bytes()).hexdigest()
        render(FigureSpec("finite", str(csv_path), str(tmp_path / "fig")))
        after = hashlib.sha256(csv_path.read_bytes()).hexdigest()
        assert before == after

    def test_unknown_panel_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            FigureSpec("finite", "x.csv", str(tmp_path), panels=("hologram",))


class TestRenderRealRuns:
    def test_second_order_panel_set(self, finite_csv, tmp_path):
        written = render(FigureSpec("finite", str(finite_csv), str(tmp_path)))
        stems = sorted({p.stem for p in written})
        assert stems == [
            "finite_bounds",
            "finite_input",
            "finite_phase",
            "finite_timeseries",
        ]
        assert len(written) == 8

    def test_third_order_panel_set(self, hofixed_csv, tmp_path):
        written = render(FigureSpec("hofixed", str(hofixed_csv), str(tmp_path)))
        stems = sorted({p.stem for p in written})
        assert stems == [
            "hofixed_bounds",
            "hofixed_input",
            "hofixed_phase",
            "hofixed_phase_deriv",
            "hofixed_timeseries",
        ]
        assert len(written) == 10

    @pytest.mark.parametrize("preset,panels", [
        ("finiteSat", 4),
        ("fixedveSat", 4),
        ("hofixedSat", 5),
    ])
    def test_remaining_presets_render_without_error(self, preset, panels, tmp_path):
        out = tmp_path / "run"
        subprocess.run(
            [sys.executable, "-m", "mccontrol", "run", preset, "--out", str(out),
             "--horizon", "0.5"],
            capture_output=True,
            text=True,
            timeout=300,
        )
        csv_path = out / f"{preset}.csv"
        assert csv_path.exists()
        written = render(FigureSpec(preset, str(csv_path), str(tmp_path / "fig")))
        assert len(written) == 2 * panels
        assert all(p.exists() and p.stat().st_size > 0 for p in written)

    def test_drive_parity_below_pinned_threshold(self, finite_csv):
        parity = drive_parity(read_columns(finite_csv))
        print(f"ACCEPT figures.drive_parity {'PASS' if parity < 0.1 else 'FAIL'} "
              f"(mean gap {parity:.4g} < 0.1)")
        assert parity < 0.1

    def test_cli_round_trip(self, finite_csv, tmp_path, capsys):
        from mcfigures.cli import main

        code = main(
            ["render", "--csv", str(finite_csv), "--preset", "finite", "--out", str(tmp_path)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "drive parity" in out
        assert (tmp_path / "finite_bounds.png").exists()
        assert (tmp_path / "finite_bounds.svg").exists()

    def test_cli_bad_csv(self, tmp_path, capsys):
        from mcfigures.cli import main

        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        code = main(["render", "--csv", str(bad), "--preset", "finite", "--out", str(tmp_path)])
        assert code == 1
