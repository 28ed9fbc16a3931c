import json
import subprocess

import jsonschema
import pytest

import sphericity as sph

COMMANDS = {
    "angle": "verify-angle",
    "width": "verify-width",
    "spindle-table": "spindle-table",
    "warped": "verify-warped",
    "sweep": "sweep",
}


def validate(instance, schema):
    jsonschema.Draft202012Validator.check_schema(schema)
    jsonschema.validate(instance, schema, cls=jsonschema.Draft202012Validator)


def test_curve_json(schema):
    for sp, k0 in [(sph.SpaceForm.flat(), 1.0), (sph.SpaceForm.sphere(1.0), 1.0), (sph.SpaceForm.hyperbolic(1.0), 2.0)]:
        validate(json.loads(sph.make_lune(sp, k0, 0.1, samples=64).to_json()), schema("curve"))
        validate(json.loads(sph.make_circle(sp, k0, samples=64).to_json()), schema("curve"))


def test_warped_json(schema):
    for m in [
        sph.warped_metric("cubic", 2.0, epsilon=0.05),
        sph.warped_metric("blend", 2.0, weight=0.5),
        sph.warped_metric("perturbed_sine", 1.0, delta=0.05),
    ]:
        validate(json.loads(m.to_json()), schema("warped_metric"))
        c = sph.warped_curve(m, 0.5, [(2, 0.02, 0.0)], samples=64)
        validate(json.loads(sph.warped_curve_json(m, c)), schema("warped_curve"))


def test_example_configs_validate(schema, configs_dir):
    paths = sorted(configs_dir.glob("*.json"))
    assert paths
    for p in paths:
        validate(json.loads(p.read_text()), schema("config"))


def test_schema_rejects_unknown_fields(schema):
    with pytest.raises(jsonschema.ValidationError):
        validate({"suite": "angle", "colour": "red"}, schema("config"))


@pytest.mark.parametrize(
    "name,expected",
    [
        ("angle_random_support", 0),
        ("width_lune_sphere", 0),
        ("spindle_table", 0),
        ("sweep", 0),
        ("warped_cubic", 0),
        ("warped_violation", 3),
    ],
)
def test_cli_reports(cli, schema, configs_dir, tmp_path, name, expected):
    config = configs_dir / f"{name}.json"
    suite = json.loads(config.read_text())["suite"]
    out = tmp_path / "out"
    proc = subprocess.run([cli, COMMANDS[suite], "--config", str(config), "--out", str(out)], capture_output=True)
    assert proc.returncode == expected, proc.stderr.decode()
    report = json.loads((out / "report.json").read_text())
    validate(report, schema("report"))
    validate(report["config"], schema("config"))
    assert report["metadata"]["timestamp"]
    for series in report["series"]:
        lines = (out / series["file"]).read_text().splitlines()
        assert lines[0].split(",") == series["columns"]
        assert len(lines) == series["rows"] + 1
