"""Smoke tests for the Python bindings: the main operations round-trip through
the compiled module and agree with the command-line reports."""

import json
import os
import subprocess

import pytest

import kslie


def test_expression_engine():
    e = kslie.parse("3/2 * a^2 / v", ["x", "v", "a"])
    assert kslie.evaluate(e, {"a": 2.0, "v": 3.0}) == pytest.approx(2.0)

    d = kslie.differentiate(kslie.parse("2/v", ["v"]), "v")
    assert kslie.evaluate(d, {"v": 2.0}) == pytest.approx(-0.5)

    box = kslie.DomainBox()
    box.bind("v", 0.5, 2.0)
    assert kslie.is_zero(kslie.parse("v/v - 1", ["v"]), box, seed=1)
    assert not kslie.is_zero(kslie.parse("v - 1", ["v"]), box, seed=1)


def test_geometry_and_brackets():
    ks = kslie.load_example("schwarz3ks")
    y1, y2, _ = ks.fields
    bracket = kslie.lie_bracket(y1, y2)
    diff = [a - b for a, b in zip(bracket.components, y1.components)]
    box = kslie.DomainBox()
    for s in ks.chart.symbols:
        box.bind(s, 0.5, 2.0)
    assert all(kslie.is_zero(c, box, seed=2) for c in diff)

    structure = kslie.validate_structure(ks.forms, samples=50, seed=3)
    assert structure.k == 2
    assert kslie.kernel_dimension_at(ks.forms[0], [1.0, 2.0, 3.0]) == 1
    assert kslie.check_hamiltonian(ks.fields[0], ks.forms[0], ks.hamiltonians[0][0], seed=4)


def test_integration_and_invariants():
    ks = kslie.load_example("schwarz3ks")
    pc = ks.pair_chart()
    lifted = [kslie.prolong_field(f, pc) for f in ks.fields]
    coeffs = [kslie.parse(c, []) for c in ("sin(t)", "0", "1")]
    field = kslie.TDependentField(lifted, coeffs)
    traj = kslie.integrate(field, [0.0, 1.0, 0.0, 0.5, 2.0, 1.0], 0.0, 1.0, 1e-3)
    assert len(traj.times) == 1001

    for label, expr in kslie.schwarzian_invariants(pc):
        report = kslie.check_constant(expr, traj, 1e-6, label)
        assert report["pass"], label


def test_verify_reports():
    report = kslie.verify("schwarz3ks", "structure", seed=7)
    assert report["summary"]["pass"]
    assert "schwarz3ks" in report["examples"]

    with pytest.raises(kslie.KslieError):
        kslie.verify("nosuch", "all")


def test_cli_json_validates_against_the_shipped_schema():
    cli = os.environ.get("KSLIE_CLI")
    source_dir = os.environ.get("KSLIE_SOURCE_DIR")
    if not cli or not source_dir:
        pytest.skip("needs KSLIE_CLI and KSLIE_SOURCE_DIR")
    jsonschema = pytest.importorskip("jsonschema")

    out = subprocess.run(
        [cli, "verify", "diffusion-rs", "structure", "--format", "json", "--seed", "5"],
        capture_output=True,
        text=True,
        check=True,
    )
    payload = json.loads(out.stdout)
    with open(os.path.join(source_dir, "docs", "report_schema.json")) as fh:
        schema = json.load(fh)
    jsonschema.validate(payload, schema)

    # the aggregate report needs a seeded cache
    subprocess.run(
        [cli, "--cache", "smoke_cache.json", "verify", "diffusion-rs", "structure"],
        capture_output=True,
        check=True,
    )
    aggregate = subprocess.run(
        [cli, "--cache", "smoke_cache.json", "report", "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
    )
    with open(os.path.join(source_dir, "docs", "aggregate_schema.json")) as fh:
        aggregate_schema = json.load(fh)
    jsonschema.validate(json.loads(aggregate.stdout), aggregate_schema)
