import json

import numpy as np
import pytest

from framelab.algebra import diagonal
from framelab.errors import GenerationFailedError, InvalidOperandError, NotAFrameError
from framelab.frames import frame_bounds, optimal_bounds
from framelab.instances import SuiteConfig, generate_instance, random_associate, random_frame
from framelab.serialization import dumps, encode_frame
from framelab.suite import report_text, run_suite


def test_config_validation():
    with pytest.raises(InvalidOperandError):
        SuiteConfig(rank=1)
    with pytest.raises(InvalidOperandError):
        SuiteConfig(trials=-1)
    with pytest.raises(InvalidOperandError):
        SuiteConfig(tol=0)
    with pytest.raises(InvalidOperandError):
        SuiteConfig.from_dict({"colour": "blue"})
    cfg = SuiteConfig.from_dict({"algebra": {"kind": "diagonal", "n": 2}})
    assert cfg.algebra == "diagonal:2"
    assert SuiteConfig.from_dict(cfg.to_dict()) == cfg


def test_generation_is_deterministic():
    cfg = SuiteConfig(seed=42)
    _, f1 = generate_instance(cfg)
    _, f2 = generate_instance(cfg)
    assert dumps(encode_frame(f1)) == dumps(encode_frame(f2))


def test_parseval_and_under_spanning(rng):
    p = random_frame(diagonal(2), 4, 3, rng, kind="parseval")
    assert frame_bounds(p) == pytest.approx((1, 1), abs=1e-12)
    with pytest.raises(NotAFrameError):
        optimal_bounds(random_frame(diagonal(2), 4, 2, rng))


def test_associate_is_well_conditioned(rng):
    from framelab import algebra as alg
    from framelab.module import inner
    xi = random_associate(diagonal(4), 3, rng)
    s = alg.spectrum(inner(xi, xi))
    assert s[0] >= 0.1 * s[-1]
    with pytest.raises(GenerationFailedError):
        random_associate(diagonal(40), 2, rng, ratio=0.99)


def test_default_suite_passes():
    report = run_suite(SuiteConfig(trials=60), timestamp=False)
    assert report["pass"], [r for r in report["checks"] if not r["pass"]]
    assert report["tool"] == "framelab" and "generated_at" not in report
    names = [r["check"] for r in report["checks"]]
    assert names[:7] == [f"axiom_T{i}" for i in range(1, 8)]
    assert names.index("cauchy_schwarz") < names.index("frame_bounds_optimal") < names.index("tensor_bounds")
    assert all(r["anchor"] for r in report["checks"])


def test_matrix_suite_records_failures_and_skips():
    report = run_suite(SuiteConfig(algebra="matrix:2", trials=60), timestamp=False)
    assert not report["pass"]
    recs = {r["check"]: r for r in report["checks"]}
    assert any(not recs[k]["pass"] and recs[k]["witness"] for k in ("axiom_T2", "axiom_T3"))
    skipped = [r for r in report["checks"] if r.get("status") == "skipped"]
    assert skipped and all(r["reason"] == "requires commutative algebra" for r in skipped)
    # witnesses serialize
    json.loads(dumps(report))


def test_zero_trials_is_vacuous():
    report = run_suite(SuiteConfig(trials=0), timestamp=False)
    assert report["pass"]
    assert report["checks"][0]["worst_residual"] is None


def test_generation_failure_is_reported():
    report = run_suite(SuiteConfig(trials=5, min_lower=1e6), timestamp=False)
    assert not report["pass"]
    failed = [r for r in report["checks"] if not r["pass"]]
    assert failed and all("instance generation failed" in r["error"] for r in failed)


def test_text_report():
    text = report_text(run_suite(SuiteConfig(trials=5), timestamp=False))
    assert text.splitlines()[-1] == "OVERALL PASS"
