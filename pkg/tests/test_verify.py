import json

import numpy as np
import pytest

from bihamso4 import verify
from bihamso4.so4 import ModelParams

PARAMS = ModelParams.from_mu(1.0, 2.0, 3.0)


def test_suite_passes_symmetric_model():
    report = verify.run_suite(PARAMS, seed=0, n_points=15)
    assert report.overall
    failed = [c.name for c in report.checks if not c.skipped and not c.passed]
    assert failed == []
    # the symmetric model with an indefinite inertia spectrum skips the Lax block
    skipped = {c.name for c in report.checks if c.skipped}
    assert skipped == {"lax_flow", "lax_angular_commutator"}


def test_suite_passes_positive_spectrum_model():
    report = verify.run_suite(ModelParams.from_mu(10.0, 1.0, 2.0), seed=1, n_points=10)
    assert report.overall
    by_name = {c.name: c for c in report.checks}
    assert not by_name["lax_flow"].skipped
    assert by_name["lax_flow"].passed


def test_suite_asymmetric_model_skips_uv_checks():
    report = verify.run_suite(ModelParams.from_mu(1.0, 2.0, 3.0, 0.5), seed=2, n_points=10)
    assert report.overall
    skipped = [c for c in report.checks if c.skipped]
    assert len(skipped) > 30
    for c in skipped:
        assert "symmetric" in c.note or "spectrum" in c.note
    run = [c for c in report.checks if not c.skipped]
    assert all(c.passed for c in run)


def test_degenerate_constant_eigenvalue_rejected():
    with pytest.raises(ValueError, match="degenerate constant eigenvalue"):
        verify.run_suite(ModelParams.from_mu(1.0, -1.0, 3.0), seed=0, n_points=5)
    # only the symmetric reduction needs mu1 + mu2 != 0
    report = verify.run_suite(ModelParams.from_mu(1.0, -1.0, 3.0, 0.2), seed=0, n_points=5)
    assert report.overall


def test_unknown_override_rejected():
    with pytest.raises(ValueError, match="unknown override"):
        verify.run_suite(PARAMS, seed=0, n_points=5, overrides=("flip_everything",))


@pytest.mark.parametrize("mutation", verify.KNOWN_OVERRIDES)
def test_mutations_break_loudly(mutation):
    report = verify.run_suite(PARAMS, seed=3, n_points=8, overrides=(mutation,))
    assert not report.overall
    loud = [
        c
        for c in report.checks
        if not c.skipped and not c.passed and c.max_residual > 1e-3
    ]
    assert loud, mutation


def test_report_serializes_and_validates():
    report = verify.run_suite(PARAMS, seed=4, n_points=5)
    doc = report.to_dict()
    verify.validate_report(doc)
    # survives a JSON round trip
    verify.validate_report(json.loads(json.dumps(doc)))
    assert doc["schema"] == "biham-euler-so4/v1"
    assert doc["params"]["mu"] == [1.0, 2.0, 3.0, 3.0]
    assert doc["params"]["symmetric"] is True


def test_validate_report_rejects_malformed():
    report = verify.run_suite(PARAMS, seed=5, n_points=5)
    doc = report.to_dict()
    bad = dict(doc)
    bad["schema"] = "something-else"
    with pytest.raises(ValueError, match="unknown schema"):
        verify.validate_report(bad)
    bad = dict(doc)
    del bad["checks"]
    with pytest.raises(ValueError, match="missing field"):
        verify.validate_report(bad)
    bad = json.loads(json.dumps(doc))
    bad["checks"][0].pop("max_residual")
    with pytest.raises(ValueError):
        verify.validate_report(bad)


def test_reports_reproducible_bit_for_bit():
    a = verify.run_suite(PARAMS, seed=6, n_points=8).to_dict()
    b = verify.run_suite(PARAMS, seed=6, n_points=8).to_dict()
    assert a == b
    c = verify.run_suite(PARAMS, seed=7, n_points=8).to_dict()
    assert a != c


def test_sample_points_deterministic_and_guarded():
    s1 = verify.sample_points("UV_complex", 20, 11, guards=verify.uv_guards(PARAMS))
    s2 = verify.sample_points("UV_complex", 20, 11, guards=verify.uv_guards(PARAMS))
    for p, q in zip(s1.points, s2.points):
        assert np.array_equal(p.coords, q.coords)
    for p in s1.points:
        assert abs(p.coords[0]) > 0.1 and abs(p.coords[3]) > 0.1


def test_sample_points_kinds():
    m = verify.sample_points("M_real", 5, 0)
    assert all(p.coords.dtype.kind == "f" for p in m.points)
    leafs = verify.sample_points("LEAF", 5, 0, guards=verify.leaf_guards(PARAMS))
    assert all(p.coords.shape == (4,) for p in leafs.points)
    with pytest.raises(ValueError, match="unknown point kind"):
        verify.sample_points("imaginary", 5, 0)


def test_sampler_starvation():
    with pytest.raises(RuntimeError, match="sampler starved"):
        verify.sample_points("M_real", 1, 0, guards=[lambda pt: False])


def test_diagnostics_present():
    report = verify.run_suite(PARAMS, seed=8, n_points=6)
    names = {d["name"] for d in report.diagnostics}
    assert "generalized_lenard_fit" in names
    assert "q_dh1_not_casimir" in names
    assert "uv_tensor_ratio" in names
