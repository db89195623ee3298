import math

import pytest

from qscatter.commands import CommandRequest, hard_sphere_config, resolve_model
from qscatter.errors import InputError, SpecParseError
from qscatter.specfile import HardSphereSpec, load_spec, parse_spec

MODES_TEXT = """\
# two channels
k = 1.5   # wave number

[modes]
ell   delta   theta_pol   xi
1     0.05    0.02        0.3
0     0.30    0.10        0.0
"""

HARD_SPHERE_TEXT = """\
k = 2.0

[hard_sphere]
R = 0.25
ell_max = 4
xi = 30
clamp = yes
"""


def test_parse_modes_happy_path():
    spec = parse_spec(MODES_TEXT)

    assert spec.k == 1.5
    assert spec.hard_sphere is None
    assert [m.ell for m in spec.modes] == [1, 0]
    assert spec.modes[0].xi == 0.3

    model = resolve_model(CommandRequest(spec=spec))

    # models keep their modes sorted by ell
    assert [m.ell for m in model.modes] == [0, 1]
    assert model.mode(0).delta == 0.30


def test_xi_column_is_optional():
    spec = parse_spec("k = 1\n[modes]\nell delta theta_pol\n0 0.1 0.2\n")

    assert spec.modes[0].xi == 0.0


def test_degrees_convert_every_angle():
    text = "k = 1\n[modes]\ntheta_pol delta ell xi\n45 90 0 180\n"

    mode = parse_spec(text, degrees=True).modes[0]

    assert mode.theta_pol == pytest.approx(math.pi / 4)
    assert mode.delta == pytest.approx(math.pi / 2)
    assert mode.xi == pytest.approx(math.pi)


def test_parse_hard_sphere_happy_path():
    spec = parse_spec(HARD_SPHERE_TEXT, degrees=True)

    assert spec.modes is None
    assert spec.hard_sphere == HardSphereSpec(
        R=0.25, ell_max=4, xi=pytest.approx(math.pi / 6), clamp=True
    )

    config = hard_sphere_config(CommandRequest(spec=spec), k=3.0)

    assert config.k == 3.0
    assert config.kR == pytest.approx(0.75)
    assert config.clamp is True


def test_hard_sphere_defaults():
    spec = parse_spec("k = 2\n[hard_sphere]\nR = 0.25\n")

    assert spec.hard_sphere == HardSphereSpec(R=0.25)
    # ell_max defaults to ceil(kR) + 8 = 9
    assert len(resolve_model(CommandRequest(spec=spec)).modes) == 10


def test_resolved_model_takes_the_wave_number_override():
    spec = parse_spec(MODES_TEXT)

    assert resolve_model(CommandRequest(spec=spec), k=4.0).k == 4.0
    assert resolve_model(CommandRequest(spec=spec, k=3.0)).k == 3.0
    with pytest.raises(InputError):
        hard_sphere_config(CommandRequest(spec=spec))


# ---------------------------------------------------------------------------
# Errors carry line and column
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, line, column, fragment",
    [
        ("k = -1\n[modes]\nell delta theta_pol\n", 1, 5, "positive"),
        ("k = one\n", 1, 5, "must be a number"),
        ("k = 1\nk = 2\n", 2, 1, "duplicate key"),
        ("q = 1\n", 1, 1, "unknown top-level key"),
        ("k = 1\n[potential]\n", 2, 1, "unknown section"),
        ("k = 1\n[modes]\nell delta theta_pol spin\n", 3, 21, "unknown mode column"),
        ("k = 1\n[modes]\nell delta\n", 3, 1, "lacks"),
        ("k = 1\n[modes]\nell delta theta_pol\n0 0.1\n", 4, 6, "expected 3 columns"),
        ("k = 1\n[modes]\nell delta theta_pol\n0 0.1 2.0\n", 4, 7, "theta_pol"),
        ("k = 1\n[modes]\nell delta theta_pol\n-1 0.1 0.0\n", 4, 1, "non-negative"),
        ("k = 1\n[modes]\nell delta theta_pol\n0 0.1 0.0\n0 0.2 0.0\n", 5, 1, "first at line 4"),
        ("k = 1\n[hard_sphere]\nR = 0\n", 3, 5, "R must be positive"),
        ("k = 1\n[hard_sphere]\nR = 1\nclamp = maybe\n", 4, 9, "true or false"),
        ("k = 1\n[hard_sphere]\nradius = 1\n", 3, 1, "unknown [hard_sphere] key"),
        ("k = 1\n[hard_sphere]\nell_max = 3\n", 2, 1, "requires 'R'"),
        ("k = 1\n[modes]\n[modes]\n", 3, 1, "repeated"),
    ],
)
def test_parse_errors_point_at_the_offending_token(text, line, column, fragment):
    with pytest.raises(SpecParseError) as excinfo:
        parse_spec(text)

    err = excinfo.value
    assert (err.line, err.column) == (line, column)
    assert fragment in err.message
    assert str(err).startswith(f"line {line}, column {column}: ")


def test_missing_k_is_reported():
    with pytest.raises(SpecParseError, match="missing top-level 'k"):
        parse_spec("[modes]\nell delta theta_pol\n")


@pytest.mark.parametrize(
    "text",
    [
        "k = 1\n",
        "k = 1\n[modes]\nell delta theta_pol\n[hard_sphere]\nR = 1\n",
    ],
)
def test_exactly_one_model_section(text):
    with pytest.raises(SpecParseError, match="exactly one"):
        parse_spec(text)


def test_degrees_apply_before_the_theta_range_check():
    text = "k = 1\n[modes]\nell delta theta_pol\n0 10 100\n"

    with pytest.raises(SpecParseError, match="theta_pol"):
        parse_spec(text, degrees=True)
    # 100 degrees is out of range, but 1.0 radian is not
    assert parse_spec(text.replace("100", "1.0")).modes[0].theta_pol == 1.0


def test_parse_errors_are_input_errors():
    with pytest.raises(InputError):
        parse_spec("nonsense\n")


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------


def test_load_spec_reads_utf8_file(tmp_path):
    path = tmp_path / "model.qs"
    path.write_text(MODES_TEXT, encoding="utf-8")

    assert load_spec(path) == parse_spec(MODES_TEXT)


def test_load_spec_missing_file(tmp_path):
    with pytest.raises(SpecParseError, match="cannot read"):
        load_spec(tmp_path / "absent.qs")
