"""Acceptance criteria 1-10, at the stated tolerances.

Run under pytest (a per-criterion PASS/FAIL summary is printed at the end)
or directly with ``python tests/test_acceptance.py``.
"""

import json
import math
import sys

import numpy as np
import pytest

from framelab import algebra as alg
from framelab.algebra import diagonal, matrix
from framelab.cli import main
from framelab.errors import NotAFrameError
from framelab.frames import (
    TwoFrame,
    frame_bounds,
    frame_operator_apply,
    frame_operator_norm,
    frame_spectrum,
    from_module_frame,
    optimal_bounds,
    reconstruct,
    restrict_to_complement_frame,
    synthesis_operator_norm,
    tightness_from_reconstruction,
    verify_bounds,
)
from framelab.instances import random_frame, random_module_frame
from framelab.module import (
    ModuleVector,
    basis_vector,
    check_module_axioms,
    module_action,
    module_frame_bounds,
    random_vector,
    vector_norm,
)
from framelab.quotient import project
from framelab.tensor import (
    tensor_frame,
    tensor_frame_operator_residual,
    tensor_tightness_from_reconstruction,
)
from framelab.two_inner import (
    TwoInnerSpace,
    cauchy_schwarz_gap,
    check_axioms,
    sup_characterization_residual,
    two_inner,
    two_norm,
)

TRIALS = 1000


def _scalar_vec(*coords):
    return ModuleVector(diagonal(1), [[c] for c in coords])


@pytest.fixture(scope="module")
def random_frames():
    rng = np.random.default_rng(2024)
    return [random_frame(diagonal(2), 4, 6, rng) for _ in range(200)]


# 1 ---------------------------------------------------------------------------

def test_criterion_01_axiom_suite():
    for n in (1, 2, 4):
        for m in (2, 3, 5):
            seed = 100 * n + m
            records = check_axioms(TwoInnerSpace(diagonal(n), m), TRIALS, seed, 1e-9)
            records += check_module_axioms(diagonal(n), m, TRIALS, seed, 1e-9)
            for r in records:
                assert r["pass"], (n, m, r["axiom"], r["worst_residual"])
                assert r["worst_residual"] <= 1e-9


# 2 ---------------------------------------------------------------------------

def test_criterion_02_cauchy_schwarz():
    rng = np.random.default_rng(2)
    space = TwoInnerSpace(diagonal(3), 4)
    for _ in range(TRIALS):
        x, y, z = (space.random_vector(rng) for _ in range(3))
        assert alg.is_positive(cauchy_schwarz_gap(x, y, z), 1e-9)
        assert alg.norm(cauchy_schwarz_gap(x, x, z)) <= 1e-12


# 3 ---------------------------------------------------------------------------

def test_criterion_03_two_norm():
    rng = np.random.default_rng(3)
    space = TwoInnerSpace(diagonal(3), 4)
    for k in range(TRIALS):
        x, y, z = (space.random_vector(rng) for _ in range(3))
        a = alg.random_element(space.algebra, rng)
        assert alg.norm(two_inner(x, y, z)) <= two_norm(x, z) * two_norm(y, z) + 1e-9
        assert sup_characterization_residual(x, y, 1e-9, samples=2, seed=k) <= 1e-9
        assert abs(two_norm(x, y + module_action(a, x)) - two_norm(x, y)) <= 1e-9


# 4 ---------------------------------------------------------------------------

def test_criterion_04_fixed_frame_oracle():
    xi = _scalar_vec(1, 0, 0)
    f = TwoFrame([_scalar_vec(0, 1, 0), _scalar_vec(0, 0, 1), _scalar_vec(0, 1, 1)], xi)
    a, b = optimal_bounds(f)
    assert abs(a - 1) <= 1e-10 and abs(b - 3) <= 1e-10
    # S acts on complement coordinates; change to the (e2, e3) coordinates
    P = f.quotient.basis[0][1:, :]
    S = P @ f.operators.frame_matrix[0] @ np.linalg.inv(P)
    np.testing.assert_allclose(S, [[2, 1], [1, 2]], atol=1e-10)
    e2 = basis_vector(diagonal(1), 3, 1)
    assert vector_norm(reconstruct(f, e2) - e2) <= 1e-10


# 5 ---------------------------------------------------------------------------

def test_criterion_05_reconstruction(random_frames):
    rng = np.random.default_rng(5)
    for f in random_frames:
        for _ in range(20):
            x = random_vector(f.algebra, f.rank, rng)
            assert vector_norm(reconstruct(f, x) - project(x, f.quotient)) <= 1e-8 * vector_norm(x)


# 6 ---------------------------------------------------------------------------

def test_criterion_06_operator_norms(random_frames):
    rng = np.random.default_rng(6)
    for f in random_frames:
        a, b = optimal_bounds(f)
        assert synthesis_operator_norm(f) <= math.sqrt(b) + 1e-9
        assert frame_operator_norm(f) <= b + 1e-9
        assert frame_spectrum(f).lower >= a - 1e-9
        xi = f.associate
        x, y = (random_vector(f.algebra, f.rank, rng) for _ in range(2))
        sx, sy = frame_operator_apply(f, x), frame_operator_apply(f, y)
        assert alg.norm(two_inner(sx, y, xi) - two_inner(x, sy, xi)) <= 1e-9
        xx, q = two_inner(x, x, xi), two_inner(sx, x, xi)
        assert alg.positivity_residual(q - xx * a) <= 1e-9
        assert alg.positivity_residual(xx * b - q) <= 1e-9


# 7 ---------------------------------------------------------------------------

def test_criterion_07_conversions():
    rng = np.random.default_rng(7)
    for _ in range(200):
        mf = random_module_frame(diagonal(2), 3, 4, rng)
        xi = random_vector(diagonal(2), 3, rng)
        lo, hi = from_module_frame(mf, xi).claimed_bounds
        a, b = frame_bounds(TwoFrame(mf.vectors, xi, check_independence=False))
        assert lo <= a + 1e-9 * max(1.0, hi) and b <= hi + 1e-9 * max(1.0, hi)

        f = random_frame(diagonal(2), 4, 5, rng)
        proj = restrict_to_complement_frame(f, 1e-9)
        a_mod, b_mod = module_frame_bounds(proj, basis=f.quotient.basis)
        lower, upper = proj.claimed_bounds
        assert a_mod > 0 and lower <= a_mod + 1e-9 and b_mod <= upper + 1e-9


# 8 ---------------------------------------------------------------------------

def test_criterion_08_tensor_suite():
    rng = np.random.default_rng(8)
    for k in range(100):
        f = random_frame(diagonal(2), 3, 4, rng)
        g = random_frame(diagonal(1 + k % 2), 3, 3, rng)
        a, b = optimal_bounds(f)
        c, d = optimal_bounds(g)
        tf = tensor_frame(f, g)
        pa, pb = frame_bounds(tf.product)
        assert pa >= a * c - 1e-8 and pb <= b * d + 1e-8
        assert tensor_frame_operator_residual(f, g, samples=2, seed=k) <= 1e-9

    for _ in range(20):
        p1 = random_frame(diagonal(2), 3, 2, rng, kind="parseval")
        p2 = random_frame(diagonal(1), 4, 5, rng, kind="parseval")
        pt = tensor_frame(p1, p2)
        lo, hi = frame_bounds(pt.product)
        assert abs(lo - 1) <= 1e-9 and abs(hi - 1) <= 1e-9
        assert tensor_tightness_from_reconstruction(pt, 1e-9)
        assert tightness_from_reconstruction(p1.vectors, p1.associate, 1e-9)


# 9 ---------------------------------------------------------------------------

def test_criterion_09_negative_controls():
    records = check_axioms(TwoInnerSpace(matrix(2), 3), 200, 9, 1e-9)
    failing = [r for r in records if r["axiom"] in ("T2", "T3") and not r["pass"]]
    assert failing and all(r["witness"] is not None for r in failing)

    rng = np.random.default_rng(9)
    thin = random_frame(diagonal(2), 5, 3, rng)
    with pytest.raises(NotAFrameError):
        optimal_bounds(thin)

    f = random_frame(diagonal(2), 4, 6, rng, min_lower=0.2)
    a, b = optimal_bounds(f)
    v = verify_bounds(f, a * 1.01, b, 1e-9)
    assert not v.passed and v.witness is not None
    assert a * 1.01 * v.witness_norm > v.witness_form
    # the witness really is a vector where the claimed lower bound breaks
    w = v.witness
    lhs = two_inner(frame_operator_apply(f, w), w, f.associate)
    assert abs(lhs.data[v.witness_point] - v.witness_form) <= 1e-9
    assert abs(two_inner(w, w, f.associate).data[v.witness_point] - v.witness_norm) <= 1e-9


# 10 --------------------------------------------------------------------------

def test_criterion_10_determinism(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("FRAMELAB_SEED", raising=False)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"algebra": "diagonal:3", "rank": 4, "frame_size": 6, "trials": 100, "seed": 1}))

    reports = []
    for _ in range(2):
        assert main(["suite", "--config", str(cfg)]) == 0
        rep = json.loads(capsys.readouterr().out)
        rep.pop("generated_at")
        reports.append(json.dumps(rep, sort_keys=True))
    assert reports[0] == reports[1]

    bad = tmp_path / "matrix.json"
    bad.write_text(json.dumps({"algebra": "matrix:2", "trials": 50}))
    assert main(["suite", "--config", str(bad)]) == 1
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"rank": 1}))
    assert main(["suite", "--config", str(invalid)]) == 2
    assert main(["suite", "--config", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
