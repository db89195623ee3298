import math
import subprocess
import sys
from pathlib import Path

import pytest

from qscatter.cli import run
from qscatter.commands import parse_sweep, sweep_values, tree
from qscatter.config import settings
from qscatter.csvio import (
    parse_document,
    read_amplitude_csv,
    read_consistency_csv,
    read_cross_section_csv,
    read_hard_sphere_csv,
    read_matching_csv,
)
from qscatter.errors import SweepFormatError

ROOT = Path(__file__).resolve().parents[1]
REFERENCE_AMPLITUDE = Path(__file__).parent / "data" / "hard_sphere_amplitude.csv"
HARD_SPHERE_AMPLITUDE = ("amplitude", "--k", "1", "--radius", "0.5", "--lmax", "4")

TWO_MODES = """\
k = 1.0
[modes]
ell delta theta_pol xi
0   0.4   0.3       0.2
1   0.1   0.05      0.0
"""

COMPLEX_MODES = """\
k = 1.0
[modes]
ell delta theta_pol
0   0.4   0.0
1   0.1   0.0
"""

HARD_SPHERE = """\
k = 2.0
[hard_sphere]
R = 0.25
ell_max = 2
"""


def _run(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


def _spec(tmp_path, text, name="model.qs"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_registry_holds_every_command():
    names = [command.name for command in tree]

    assert len(tree) == 5
    assert names == ["amplitude", "cross-section", "hard-sphere", "match", "optical"]
    assert all(command.description for command in tree)


def test_parse_sweep():
    assert parse_sweep("0.01:0.1:5") == (0.01, 0.1, 5)
    assert sweep_values((1.0, 2.0, 3)) == [1.0, 1.5, 2.0]
    assert sweep_values((0.5, 9.0, 1)) == [0.5]

    for bad in ("1:2", "a:b:3", "0:1:0", "0:inf:3"):
        with pytest.raises(SweepFormatError):
            parse_sweep(bad)


# ---------------------------------------------------------------------------
# amplitude
# ---------------------------------------------------------------------------


def test_amplitude_output_is_deterministic(capsys):
    code, first = _run(capsys, *HARD_SPHERE_AMPLITUDE)
    _, second = _run(capsys, *HARD_SPHERE_AMPLITUDE)

    assert code == 0
    assert first == second
    lines = first.splitlines()
    assert len(lines) == 2 + 181
    assert lines[0].startswith("# qscatter 0.1.0 amplitude ")
    assert "theta_points=181" in lines[0]
    assert "workers" not in lines[0]
    assert lines[1] == "theta,F_w,F_x,F_y,F_z,sigma_diff"


def test_hard_sphere_amplitude_matches_reference(capsys):
    code, out = _run(capsys, *HARD_SPHERE_AMPLITUDE)
    reference = REFERENCE_AMPLITUDE.read_text(encoding="utf-8")

    assert code == 0
    provenance, header = reference.splitlines()[:2]
    assert out.splitlines()[0] == provenance.replace(
        "quad_order=64", f"quad_order={settings.quad_order}"
    )
    assert out.splitlines()[1] == header

    samples = read_amplitude_csv(out)
    expected = read_amplitude_csv(reference)
    assert len(samples) == len(expected) == 181
    for got, want in zip(samples, expected):
        assert got.theta == pytest.approx(want.theta, abs=1e-14)
        assert got.F.components == pytest.approx(want.F.components, rel=1e-10, abs=1e-13)
        assert got.sigma_diff == pytest.approx(want.sigma_diff, rel=1e-10)


def test_amplitude_is_byte_identical_across_processes():
    argv = [sys.executable, str(ROOT / "main.py"), *HARD_SPHERE_AMPLITUDE]

    first, second = (
        subprocess.run(argv, cwd=ROOT, capture_output=True, check=True).stdout for _ in range(2)
    )

    assert first == second
    assert len(first.splitlines()) == 2 + 181


def test_amplitude_of_a_model_without_scattering_is_zero(capsys, tmp_path):
    spec = _spec(tmp_path, "k = 1\n[modes]\nell delta theta_pol\n0 0 0\n1 0 0\n2 0 0\n")

    code, out = _run(capsys, "amplitude", "--spec", spec, "--theta-points", "7")

    assert code == 0
    samples = read_amplitude_csv(out)
    assert len(samples) == 7
    assert all(s.F.norm() == 0.0 and s.sigma_diff == 0.0 for s in samples)


def test_complex_modes_keep_the_amplitude_complex(capsys, tmp_path):
    spec = _spec(tmp_path, COMPLEX_MODES)

    code, out = _run(capsys, "amplitude", "--spec", spec)

    assert code == 0
    for sample in read_amplitude_csv(out):
        assert sample.F.z1 == 0j
    assert any(sample.sigma_diff > 0.0 for sample in read_amplitude_csv(out))


def test_amplitude_angles_in_degrees(capsys, tmp_path):
    spec = _spec(tmp_path, TWO_MODES)

    _, out = _run(capsys, "amplitude", "--spec", spec, "--theta-points", "3", "--degrees")

    thetas = [float(rec["theta"]) for rec in parse_document(out).records()]
    assert thetas == pytest.approx([0.0, 90.0, 180.0])


def test_output_file(capsys, tmp_path):
    target = tmp_path / "amplitude.csv"

    code, out = _run(
        capsys, "amplitude", "--k", "1", "--radius", "0.5", "--out", str(target)
    )

    assert code == 0
    assert out == ""
    assert len(read_amplitude_csv(target.read_text(encoding="utf-8"))) == 181


# ---------------------------------------------------------------------------
# cross-section
# ---------------------------------------------------------------------------


def test_low_energy_sweep_doubles_the_complex_cross_section(capsys):
    code, out = _run(
        capsys, "cross-section", "--radius", "1", "--sweep", "0.01:0.1:5", "--workers", "2"
    )

    assert code == 0
    rows = read_cross_section_csv(out)
    assert [row.k for row in rows] == pytest.approx([0.01, 0.0325, 0.055, 0.0775, 0.1])
    for row in rows:
        assert row.ratio == pytest.approx(2.0, abs=0.05)
        assert row.sigma_quadrature == pytest.approx(row.sigma_closed, rel=1e-10)


def test_zeroed_polarization_gives_ratio_one(capsys, tmp_path):
    spec = _spec(tmp_path, COMPLEX_MODES)

    code, out = _run(capsys, "cross-section", "--spec", spec)

    assert code == 0
    (row,) = read_cross_section_csv(out)
    assert row.ratio == 1.0
    assert row.sigma_closed == row.sigma_complex_limit


def test_mode_table_sweep_runs_over_k(capsys, tmp_path):
    spec = _spec(tmp_path, TWO_MODES)

    _, out = _run(capsys, "cross-section", "--spec", spec, "--sweep", "1:4:4")

    rows = read_cross_section_csv(out)
    assert [row.k for row in rows] == [1.0, 2.0, 3.0, 4.0]
    # fixed angles: sigma falls as 1/k^2
    assert rows[1].sigma_closed == pytest.approx(rows[0].sigma_closed / 4.0, rel=1e-12)


def test_empty_model_has_undefined_ratio(capsys, tmp_path):
    spec = _spec(tmp_path, "k = 1\n[modes]\nell delta theta_pol\n")

    _, out = _run(capsys, "cross-section", "--spec", spec)

    (row,) = read_cross_section_csv(out)
    assert row.sigma_closed == 0.0
    assert math.isnan(row.ratio)


# ---------------------------------------------------------------------------
# hard-sphere
# ---------------------------------------------------------------------------


def test_hard_sphere_table(capsys, tmp_path):
    spec = _spec(tmp_path, HARD_SPHERE)

    code, out = _run(capsys, "hard-sphere", "--spec", spec, "--degrees")

    assert code == 0
    rows, summary = read_hard_sphere_csv(out)
    assert [row.ell for row in rows] == [0, 1, 2]
    assert rows[0].delta == pytest.approx(-math.degrees(0.5), rel=1e-12)
    assert not any(row.saturated for row in rows)
    assert summary["sigma_high_energy"] == pytest.approx(summary["sigma_closed"], rel=1e-10)
    assert set(summary) == {
        "sigma_closed",
        "sigma_high_energy",
        "sigma_complex_limit",
        "sigma_low_energy_estimate",
        "correction_coefficient",
    }


def test_saturated_hard_sphere_needs_clamp(capsys):
    code, out = _run(capsys, "hard-sphere", "--k", "5", "--radius", "1")

    assert code == 3
    assert out == ""

    code, out = _run(capsys, "hard-sphere", "--k", "5", "--radius", "1", "--clamp")

    assert code == 0
    rows, _ = read_hard_sphere_csv(out)
    assert rows[0].saturated is True
    assert abs(rows[0].theta_pol) == pytest.approx(math.pi / 2)


# ---------------------------------------------------------------------------
# match
# ---------------------------------------------------------------------------


def test_match_on_a_hard_sphere(capsys, tmp_path):
    spec = _spec(tmp_path, HARD_SPHERE)

    code, out = _run(capsys, "match", "--spec", spec)

    assert code == 0
    reports = read_matching_csv(out)
    assert [rep.ell for rep in reports] == [0, 1, 2]
    for rep in reports:
        assert rep.a == 0.25
        assert rep.gamma1 is None
        for residual in rep.residuals:
            assert residual.gamma0_residual < 1e-6


def test_match_in_the_complex_limit(capsys, tmp_path):
    spec = _spec(tmp_path, COMPLEX_MODES)

    code, out = _run(capsys, "match", "--spec", spec, "--match-radius", "1.7")

    assert code == 0
    for rec in parse_document(out).records():
        assert float(rec["gamma1_re"]) == 0.0
        assert float(rec["gamma1_im"]) == 0.0


def test_match_needs_a_radius_for_mode_tables(capsys, tmp_path):
    spec = _spec(tmp_path, TWO_MODES)

    code, _ = _run(capsys, "match", "--spec", spec)

    assert code == 2


# ---------------------------------------------------------------------------
# optical
# ---------------------------------------------------------------------------


def test_optical_report(capsys, tmp_path):
    spec = _spec(tmp_path, TWO_MODES)

    code, out = _run(capsys, "optical", "--spec", spec)

    assert code == 0
    report = read_consistency_csv(out)
    assert [r for r, _ in report.flux_residuals] == [50.0, 100.0, 200.0, 400.0]
    assert report.sigma_quadrature == pytest.approx(report.sigma_closed, rel=1e-10)
    assert len(report.notes) >= 3


@pytest.mark.parametrize("radii", ["100,50,200,400", "100", "50,100,200"])
def test_optical_rejects_bad_radii(capsys, tmp_path, radii):
    spec = _spec(tmp_path, TWO_MODES)

    code, out = _run(capsys, "optical", "--spec", spec, "--radii", radii)

    assert code == 2
    assert out == ""


def test_optical_radii_are_checked_before_the_model(capsys):
    # k R = 1 saturates ell = 0
    code, _ = _run(capsys, "optical", "--k", "1", "--radius", "1", "--radii", "100")

    assert code == 2


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("amplitude",),
        ("amplitude", "--k", "-1", "--radius", "1"),
        ("cross-section", "--radius", "1", "--sweep", "0.1:0.2"),
        ("cross-section", "--radius", "1", "--sweep", "0.1:0.2:3", "--workers", "0"),
        ("amplitude", "--k", "1", "--radius", "1", "--theta-points", "1"),
        ("amplitude", "--k", "1e200", "--radius", "1e200"),
        ("hard-sphere", "--k", "1e200", "--radius", "1e200", "--clamp"),
        ("hard-sphere", "--k", "1", "--radius", "0.5", "--xi", "nan"),
        ("hard-sphere", "--k", "1", "--radius", "0.5", "--xi", "inf"),
        ("launch",),
    ],
)
def test_input_errors_exit_with_two(capsys, argv):
    assert run(list(argv)) == 2


def test_malformed_model_file_exits_with_two(capsys, tmp_path, caplog):
    spec = _spec(tmp_path, "k = 1\n[modes]\nell delta theta_pol\n0 0.1\n")

    code, out = _run(capsys, "amplitude", "--spec", spec)

    assert code == 2
    assert out == ""
    assert "line 4, column 6" in caplog.text


def test_missing_model_file_exits_with_two(capsys, tmp_path):
    code, _ = _run(capsys, "amplitude", "--spec", str(tmp_path / "absent.qs"))

    assert code == 2


def test_version_flag(capsys):
    code, out = _run(capsys, "--version")

    assert code == 0
    assert out.strip() == "qscatter 0.1.0"


def test_bad_grid_wins_over_a_saturated_sphere(capsys, caplog):
    # k R = 1 saturates ell = 0, but the grid is rejected first
    code, out = _run(capsys, "amplitude", "--k", "1", "--radius", "1", "--theta-points", "0")

    assert code == 2
    assert out == ""
    assert "saturated" not in caplog.text


def test_overflowing_hard_sphere_file_exits_with_two(capsys, tmp_path):
    spec = _spec(tmp_path, "k = 1e200\n[hard_sphere]\nR = 1e200\n")

    for command in ("amplitude", "hard-sphere", "cross-section"):
        code, out = _run(capsys, command, "--spec", spec)
        assert code == 2
        assert out == ""
