import json

import pytest
import yaml

from snewton import cli
from snewton import config as config_mod
from snewton.config import ConfigError, config_hash, load, resolve

FAST = {"grid": {"n": 32, "h": 1.5}, "oracle": {"npoints": 3000}}


def write_cfg(tmp_path, doc, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(doc))
    return str(p)


def run(tmp_path, command, doc=None, extra=()):
    args = ["--quiet", "--out", str(tmp_path / "runs")]
    if doc is not None:
        args += ["--config", write_cfg(tmp_path, doc)]
    return cli.main([*args, *extra, command])


def run_dir(tmp_path, command):
    (d,) = [p for p in (tmp_path / "runs").iterdir() if p.name.startswith(command)]
    return d


# --------------------------------------------------------------------------
# config
# --------------------------------------------------------------------------


def test_defaults_validate():
    cfg = resolve({})
    assert cfg["grid"] == {"n": 64, "h": 1.0}
    config_mod.validate(cfg)


@pytest.mark.parametrize(
    "doc",
    [
        {"gird": {"n": 64}},
        {"grid": {"n": 64, "h": 1.0, "m": 3}},
        {"solver": {"tolerance": 1e-6}},
        {"kernel": {"variant": "yukawa"}},
        {"grid": {"n": 48, "h": 1.0}},
        {"grid": {"n": 64, "h": -1.0}},
        {"kernel": {"variant": "sphere"}},
        {"physical": {"M": 1.0}, "dimensionless": True},
        {"physical": {"hbar": 1.0}},
    ],
)
def test_invalid_configs_rejected(doc):
    with pytest.raises(ConfigError):
        resolve(doc)


def test_physical_block_switches_units():
    cfg = resolve({"physical": {"M": 1e-3}})
    assert cfg["dimensionless"] is False


def test_load_yaml_and_json(tmp_path):
    y = tmp_path / "a.yaml"
    y.write_text("grid:\n  n: 32\n  h: 0.5\n")
    j = tmp_path / "a.json"
    j.write_text(json.dumps({"grid": {"n": 32, "h": 0.5}}))
    assert load(y) == load(j)
    bad = tmp_path / "bad.yaml"
    bad.write_text("grid: [unclosed\n")
    with pytest.raises(ConfigError):
        load(bad)


def test_config_hash():
    a, b = resolve({}), resolve({})
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(resolve({"grid": {"n": 32, "h": 1.0}}))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def test_critical_size_command(tmp_path):
    assert run(tmp_path, "critical-size") == 0
    d = run_dir(tmp_path, "critical-size")
    s = json.loads((d / "summary.json").read_text())
    assert 3e-6 <= s["R_c"] <= 3e-5
    assert s["density_ratio_factor"] == pytest.approx(10**0.9)
    assert s["units"]["R_c"] == "cm"
    assert {"config.json", "summary.json", "record.json", "critical_size.csv", "plot.gp"} <= {p.name for p in d.iterdir()}


def test_ground_state_command(tmp_path):
    doc = {**FAST, "dimensionless": False, "physical": {"M": 1e-3}}
    assert run(tmp_path, "ground-state", doc) == 0
    d = run_dir(tmp_path, "ground-state")
    s = json.loads((d / "summary.json").read_text())
    dl = s["dimensionless"]
    assert dl["eps_over_E"] == pytest.approx(3.0, rel=1e-2)
    assert s["physical"]["width_cm"] == pytest.approx(dl["width"] * s["physical"]["length_unit_cm"])
    assert s["physical"]["length_unit_cm"] == pytest.approx(1.67e-38, rel=5e-3)
    assert abs(s["oracle"]["relative_difference"]["epsilon"]) < 5e-3
    header = (d / "radial_profile.csv").read_text().splitlines()[0]
    assert header == "r,phi_grid,phi_oracle"
    record = json.loads((d / "record.json").read_text())
    assert record["exit_code"] == 0 and "phi0.snwf" in record["files"]
    # the echoed config re-validates
    config_mod.validate(json.loads((d / "config.json").read_text()))


def test_no_ground_state_exit_code(tmp_path):
    assert run(tmp_path, "ground-state", {**FAST, "kernel": {"variant": "none"}}) == 3


def test_non_convergence_exit_code(tmp_path):
    assert run(tmp_path, "ground-state", {**FAST, "solver": {"max_iter": 2}}) == 3


def test_validation_exit_codes(tmp_path):
    assert run(tmp_path, "ground-state", {"grid": {"n": 32, "h": 1.5, "bogus": 1}}) == 2
    assert cli.main(["--quiet", "--config", str(tmp_path / "missing.yaml"), "critical-size"]) == 2
    assert run(tmp_path, "sweep-mass", {**FAST, "sweep_mass": {"masses": [1.0, 2.0]}}) == 2
    assert cli.main(["--quiet", "--workers", "0", "critical-size"]) == 2


def test_threshold_breach_exit_code(tmp_path):
    doc = {**FAST, "evolve": {"init": "gaussian", "steps": 10, "dt": 0.1, "max_energy_drift": 1e-300}}
    assert run(tmp_path, "evolve", doc) == 4
    d = run_dir(tmp_path, "evolve")
    assert json.loads((d / "record.json").read_text())["failures"]


def test_evolve_outputs(tmp_path):
    doc = {**FAST, "evolve": {"init": "gaussian", "steps": 20, "dt": 0.05, "monitor_stride": 5, "snapshot_stride": 10, "v_quanta": [1, 0, 0]}}
    assert run(tmp_path, "evolve", doc) == 0
    d = run_dir(tmp_path, "evolve")
    names = {p.name for p in d.iterdir()}
    assert {"trajectory.csv", "snapshot_0000.snwf", "snapshot_0002.snwf"} <= names
    s = json.loads((d / "summary.json").read_text())
    assert s["drift"]["norm"] < 1e-10


def test_sweep_mass_command(tmp_path):
    doc = {**FAST, "sweep_mass": {"masses": [1e-3, 1e-2, 1e-1, 1.0]}}
    assert run(tmp_path, "sweep-mass", doc) == 0
    s = json.loads((run_dir(tmp_path, "sweep-mass") / "summary.json").read_text())
    assert s["slope"] == pytest.approx(-3.0, abs=1e-2)
    assert s["prefactor_spread"] < 1e-2
    assert s["width_over_prefactor_at_1mg_cm"] == pytest.approx(1.67e-38, rel=5e-3)


def test_sweep_radius_parallel(tmp_path):
    doc = {"sweep_radius": {"radii": [1e4, 1e6]}}
    assert run(tmp_path, "sweep-radius", doc, extra=["--workers", "2"]) == 0
    s = json.loads((run_dir(tmp_path, "sweep-radius") / "summary.json").read_text())
    assert s["slope"] == pytest.approx(0.75, abs=0.05)
    assert s["max_rel_error"] < 1e-2


def test_sweep_radius_flags_regime_violation(tmp_path):
    doc = {"sweep_radius": {"radii": [1.0, 1e4, 1e6]}}
    run(tmp_path, "sweep-radius", doc)
    rows = (run_dir(tmp_path, "sweep-radius") / "sweep_radius.csv").read_text().splitlines()
    assert rows[1].endswith("regime-violation")
    s = json.loads((run_dir(tmp_path, "sweep-radius") / "summary.json").read_text())
    assert s["fit_rows"] == 2


def test_boost_check_command(tmp_path):
    doc = {"grid": {"n": 64, "h": 1.0}, "solver": {"check_oracle": False}, "boost_check": {"steps": 10, "dt": 0.05}}
    assert run(tmp_path, "boost-check", doc) == 0
    s = json.loads((run_dir(tmp_path, "boost-check") / "summary.json").read_text())
    assert s["l2_error"] < 1e-6


def test_separability_command(tmp_path):
    assert run(tmp_path, "separability", FAST) == 0
    s = json.loads((run_dir(tmp_path, "separability") / "summary.json").read_text())
    assert s["cross_times_d_spread"] < 0.05
    assert s["point_mass_ratio_at_largest"] == pytest.approx(1.0, abs=1e-2)


def test_two_soliton_command_smoke(tmp_path):
    doc = {
        "two_soliton": {
            "ground_grid": {"n": 32, "h": 1.5},
            "n": 64,
            "separations_widths": [7],
            "t_end": 2.0,
            "dt": 0.1,
            "monitor_stride": 2,
        }
    }
    code = run(tmp_path, "two-soliton", doc)
    assert code in (0, 4)
    d = run_dir(tmp_path, "two-soliton")
    s = json.loads((d / "summary.json").read_text())
    assert s["runs"][0]["lobe_masses"] == pytest.approx([0.5, 0.5], abs=1e-4)
    assert (d / "trajectory_d7.csv").exists()


def test_identical_configs_identical_outputs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    for base in (a, b):
        assert run(base, "separability", FAST) == 0
    da, db = run_dir(a, "separability"), run_dir(b, "separability")
    assert da.name == db.name
    for f in sorted(p.name for p in da.iterdir()):
        assert (da / f).read_bytes() == (db / f).read_bytes()
