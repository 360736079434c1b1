import json
import os
import xml.etree.ElementTree as ET

import pytest

from frontindex import report as rep
from frontindex.cli import exit_code, main, run_scenario
from frontindex.config import load_config, parse_config
from frontindex.errors import ParseError, RangeError

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def test_parse_blaschke_example():
    cfg = parse_config("scenario=blaschke  family=rotational_gamma  epsilon=0.2125  grid=512", env={})
    assert cfg.scenario == "blaschke"
    assert cfg.epsilon == 17 / 80
    assert cfg.grid == 512
    assert cfg.echo() == {"scenario": "blaschke", "family": "rotational_gamma", "epsilon": 0.2125, "grid": 512}


def test_epsilon_out_of_range():
    with pytest.raises(RangeError) as exc:
        parse_config("scenario=blaschke family=rotational_gamma\n  epsilon=0.3\n", env={})
    assert (exc.value.line, exc.value.column) == (2, 11)


@pytest.mark.parametrize("text", ["", "\n\n", "# only a comment\n"])
def test_empty_config(text):
    with pytest.raises(ParseError) as exc:
        parse_config(text, env={})
    assert exc.value.line is not None and exc.value.column == 1


@pytest.mark.parametrize(
    "text, pos",
    [
        ("scenario=blaschke bogus=1", (1, 19)),
        ("scenario=blaschke\nfamily=sphere grid=abc", (2, 20)),
        ("scenario=blaschke family=sphere family=torus", (1, 33)),
        ("scenario=blaschke noequals", (1, 19)),
        ("scenario=nosuch", (1, 10)),
        ("family=sphere", (1, 1)),
    ],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_config(text, env={})
    assert (exc.value.line, exc.value.column) == pos


def test_range_errors():
    for text in [
        "scenario=front_formula family=sphere grid=7",
        "scenario=front_formula family=torus R=1 r=2",
        "scenario=front_formula family=swallowtail",
        "scenario=front_formula family=sphere eps_sing=-1",
    ]:
        with pytest.raises(RangeError):
            parse_config(text, env={})


def test_lists_and_env_overrides():
    cfg = parse_config("scenario=parallel_sweep family=bumpy t_values=-1.03,-1.02  # sweep", env={"FRONTINDEX_GRID": "64"})
    assert cfg.t_values == (-1.03, -1.02)
    assert cfg.grid == 64
    cfg = parse_config("scenario=classify_patch points=0,0;0.1,-0.06", env={})
    assert cfg.points == ((0.0, 0.0), (0.1, -0.06))
    assert cfg.family == "swallowtail"
    cfg = parse_config("scenario=parallel_sweep family=sphere t_min=-1 t_max=0 t_count=3", env={})
    assert cfg.t_values == (-1.0, -0.5, 0.0)


def test_shipped_configs_parse():
    names = sorted(f for f in os.listdir(CONFIGS) if f.endswith(".cfg"))
    assert len(names) >= 5
    for name in names:
        load_config(os.path.join(CONFIGS, name), env={})


INT_KEYS = ("lhs", "rhs", "residual", "chi_m_plus", "chi_m_minus", "a3_plus", "a3_minus")


def _assert_integer_fields(report):
    assert type(report["exit_code"]) is int
    for fr in report["formulas"]:
        for k in INT_KEYS:
            assert type(fr[k]) is int, k
        assert type(fr["degree"]["degree"]) is int
        st = fr["strata"]
        for k in ("n_curves", "a3_plus", "a3_minus"):
            assert type(st[k]) is int, k
        assert all(type(n) is int for n in st["a3_per_curve"])


def test_sphere_front_report():
    cfg = parse_config("scenario=front_formula family=sphere grid=64", env={})
    out, code = run_scenario(cfg)
    (fr,) = out["formulas"]
    assert (fr["lhs"], fr["rhs"], fr["residual"]) == (2, 2, 0)
    assert code == 0 and out["schema"] == 1
    plain = json.loads(rep.dumps(out))
    _assert_integer_fields(plain)


@pytest.mark.parametrize(
    "text",
    [
        "scenario=front_formula family=bumpy seed=3 grid=64 oracle=true",
        "scenario=classify_patch grid=64",
        "scenario=poincare_hopf field=torus_random trials=3 seed=5",
    ],
)
def test_report_is_deterministic(text):
    cfg = parse_config(text, env={})
    a, _ = run_scenario(cfg)
    b, _ = run_scenario(cfg)
    assert a["timing"]["seconds"] > 0
    assert rep.dumps(rep.without_timing(a)) == rep.dumps(rep.without_timing(b))


def test_floats_round_trip():
    cfg = parse_config("scenario=classify_patch grid=64", env={})
    out, _ = run_scenario(cfg)
    back = json.loads(rep.dumps(out))
    assert back["classifications"][1]["cascade"] == [float(x) for x in out["classifications"][1]["cascade"]]


def test_exit_code_contract():
    base = {"errors": [], "formulas": [{"residual": 0}], "warnings": []}
    assert exit_code(base) == 0
    assert exit_code({**base, "formulas": [{"residual": 2}]}) == 1
    assert exit_code({**base, "errors": [{"code": "NotMorin"}]}) == 1
    assert exit_code({**base, "warnings": ["Degenerate verdict at (0, 0)"]}) == 1
    assert exit_code({**base, "warnings": ["PoleProximity: sample skipped"]}) == 0
    bad_field = {"residual": 0, "oracle_agrees": False}
    assert exit_code({**base, "vector_fields": [bad_field]}) == 1


def test_degenerate_t_is_a_structured_error():
    cfg = parse_config("scenario=parallel_sweep family=sphere t_values=-0.5,-1.0 grid=64", env={})
    out, code = run_scenario(cfg)
    assert len(out["formulas"]) == 1 and out["formulas"][0]["residual"] == 0
    (err,) = out["errors"]
    assert err["code"] == "NotMorin" and err["t"] == -1.0
    assert code == 1


def test_main_writes_report_and_plots(tmp_path, capsys):
    cfg = tmp_path / "sinv.cfg"
    cfg.write_text("scenario=morin_map map=sin_v grid=64\n")
    code = main(["run", str(cfg), "--out", str(tmp_path / "out"), "--plots"])
    assert code == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["formulas"][0]["strata"]["n_curves"] == 2
    svg = tmp_path / "out" / "strata.svg"
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")
    assert "report.json" in capsys.readouterr().out


def test_main_parse_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("scenario=blaschke family=rotational_gamma epsilon=0.3\n")
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == 2
    assert "epsilon" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2
