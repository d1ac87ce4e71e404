"""Run every executable check on one seeded instance and collect a report."""

from __future__ import annotations

import datetime
import math

import numpy as np

from . import __version__
from . import algebra as alg
from .frames import (
    analysis,
    frame_bounds,
    frame_operator_apply,
    frame_operator_norm,
    frame_spectrum,
    from_module_frame,
    mixed_associate_residual,
    optimal_bounds,
    reconstruct,
    restrict_to_complement_frame,
    synthesis,
    synthesis_operator_norm,
    tightness_from_reconstruction,
    verify_bounds,
)
from .instances import (
    SuiteConfig,
    generate_instance,
    random_associate,
    random_frame,
    random_module_frame,
)
from .module import check_module_axioms, module_action, random_vector, vector_norm
from .quotient import project
from .tensor import (
    scalar_factor_restriction,
    tensor_frame,
    tensor_frame_operator_residual,
    tensor_tightness_from_reconstruction,
    tensor_two_inner,
    tensor_two_inner_expanded,
    tensor_vector,
)
from .two_inner import (
    cauchy_schwarz_gap,
    check_axioms,
    sup_characterization_residual,
    two_inner,
    two_norm,
)


def _record(name, anchor, passed, residual, witness=None, **extra):
    rec = {"check": name, "anchor": anchor, "pass": bool(passed),
           "worst_residual": residual, "witness": witness}
    rec.update(extra)
    return rec


def _skip(name, anchor, reason):
    return _record(name, anchor, True, None, None, status="skipped", reason=reason)


class _Worst:
    """Max-reduction of residuals; keeps the first witness past tolerance."""

    def __init__(self, tol):
        self.tol = tol
        self.value = None
        self.witness = None

    def add(self, residual, witness=None):
        residual = float(residual)
        if self.value is None or not residual <= self.value:
            self.value = residual
        if not residual <= self.tol and self.witness is None:
            self.witness = witness

    @property
    def ok(self):
        return self.value is None or self.value <= self.tol


def _cauchy_schwarz(cfg, st):
    rng, space, tol = st["rng"], st["space"], cfg.tol
    gap_w = _Worst(tol)
    eq_w = _Worst(1e-12)
    for _ in range(cfg.trials):
        x, y, z = (space.random_vector(rng) for _ in range(3))
        gap_w.add(alg.positivity_residual(cauchy_schwarz_gap(x, y, z)), {"x": x, "y": y, "z": z})
        eq_w.add(alg.norm(cauchy_schwarz_gap(x, x, z)), {"x": x, "z": z})
    return [
        _record("cauchy_schwarz", "Cauchy-Schwarz inequality for <.,.|.>", gap_w.ok, gap_w.value, gap_w.witness),
        _record("cauchy_schwarz_equality", "equality case y = x", eq_w.ok, eq_w.value, eq_w.witness),
    ]


def _two_norm(cfg, st):
    rng, space, tol = st["rng"], st["space"], cfg.tol
    bound_w, sup_w, shift_w, norm_w = (_Worst(tol) for _ in range(4))
    A = space.algebra
    for k in range(cfg.trials):
        x, y, z = (space.random_vector(rng) for _ in range(3))
        a = alg.random_element(A, rng)
        alpha = complex(rng.standard_normal(), rng.standard_normal())
        wit = {"x": x, "y": y, "z": z}
        bound_w.add(max(0.0, alg.norm(two_inner(x, y, z)) - two_norm(x, z) * two_norm(y, z)), wit)
        sup_w.add(sup_characterization_residual(x, y, tol, samples=4, seed=cfg.seed + k), wit)
        shift_w.add(abs(two_norm(x, y + module_action(a, x)) - two_norm(x, y)), {"x": x, "y": y, "a": a})
        # p(a y, y) vanishes exactly; compare its square so rounding is not amplified by sqrt
        res = max(
            0.0,
            abs(two_norm(x, y) - two_norm(y, x)),
            abs(two_norm(x * alpha, y) - abs(alpha) * two_norm(x, y)),
            two_norm(x + y, z) - two_norm(x, z) - two_norm(y, z),
            two_norm(module_action(a, x), y) - alg.norm(a) * two_norm(x, y),
            two_norm(module_action(a, y), y) ** 2,
        )
        norm_w.add(res, wit)
    return [
        _record("two_norm_product_bound", "||<x,y|z>|| <= p(x,z) p(y,z)", bound_w.ok, bound_w.value, bound_w.witness),
        _record("two_norm_sup", "p(x,y) as a supremum over p(z,y) = 1", sup_w.ok, sup_w.value, sup_w.witness),
        _record("two_norm_shift", "p(x, y + a x) = p(x, y)", shift_w.ok, shift_w.value, shift_w.witness),
        _record("two_norm_axioms", "A-2-norm axioms", norm_w.ok, norm_w.value, norm_w.witness),
    ]


def _frame_bounds(cfg, st):
    f, tol = st["frame"], cfg.tol
    a, b = optimal_bounds(f)
    recs = []
    exact = verify_bounds(f, a, b, tol)
    recs.append(_record("frame_bounds_optimal", "A-2-frame inequality, optimal bounds",
                        exact.passed, 0.0, None, optimal=[a, b]))
    tight = verify_bounds(f, a * 1.01, b, tol)
    violated = (not tight.passed and tight.witness is not None
                and a * 1.01 * tight.witness_norm > tight.witness_form)
    recs.append(_record("frame_bounds_attained", "optimal lower bound is attained",
                        violated, None, tight.witness if not violated else None))
    if f.claimed_bounds is not None:
        v = verify_bounds(f, *f.claimed_bounds, tol=tol)
        recs.append(_record("frame_bounds_claimed", "claimed A-2-frame bounds", v.passed, None, v.witness))
    return recs


def _frame_operators(cfg, st):
    f, rng, tol = st["frame"], st["rng"], cfg.tol
    a, b = optimal_bounds(f)
    norms_res = max(synthesis_operator_norm(f) - math.sqrt(b), frame_operator_norm(f) - b, 0.0)
    spec = frame_spectrum(f)
    eig_min = min(float(np.min(np.linalg.eigvals(F).real)) for F in f.operators.frame_matrix)
    inv_res = max(0.0, (a - tol) - eig_min) if spec.eigenvalues.size else 0.0
    adj, selfadj, sandwich = _Worst(tol), _Worst(tol), _Worst(tol)
    xi = f.associate
    for _ in range(cfg.trials):
        x = random_vector(f.algebra, f.rank, rng)
        y = random_vector(f.algebra, f.rank, rng)
        coeffs = [alg.random_element(f.algebra, rng) for _ in f.vectors]
        lhs = two_inner(x, synthesis(f, coeffs), xi)
        rhs = alg.zero(f.algebra)
        for c_x, c in zip(analysis(f, x), coeffs):
            rhs = rhs + c_x * c.adjoint()
        adj.add(alg.norm(lhs - rhs), {"x": x})
        sx, sy = frame_operator_apply(f, x), frame_operator_apply(f, y)
        selfadj.add(alg.norm(two_inner(sx, y, xi) - two_inner(x, sy, xi)), {"x": x, "y": y})
        xx = two_inner(x, x, xi)
        q = two_inner(sx, x, xi)
        sandwich.add(max(alg.positivity_residual(q - xx * a), alg.positivity_residual(xx * b - q)), {"x": x})
    return [
        _record("operator_norms", "||T|| <= sqrt(B), ||S|| <= B", norms_res <= tol, norms_res),
        _record("frame_operator_invertible", "S is invertible, spectrum >= A", inv_res <= tol, inv_res),
        _record("adjoint_relation", "<x, T c | xi> = sum <x, x_j | xi> c_j*", adj.ok, adj.value, adj.witness),
        _record("frame_operator_self_adjoint", "S is self-adjoint", selfadj.ok, selfadj.value, selfadj.witness),
        _record("frame_operator_positive", "A <x,x>_xi <= <S x, x>_xi <= B <x,x>_xi",
                sandwich.ok, sandwich.value, sandwich.witness),
    ]


def _reconstruction(cfg, st):
    f, rng, tol = st["frame"], st["rng"], cfg.tol
    w = _Worst(tol)
    for _ in range(cfg.trials):
        x = random_vector(f.algebra, f.rank, rng)
        r = reconstruct(f, x) - project(x, f.quotient)
        w.add(vector_norm(r) / max(vector_norm(x), 1e-300), {"x": x})
    return [_record("reconstruction", "x = sum <S^-1 x, x_i | xi> x_i", w.ok, w.value, w.witness)]


def _mixed(cfg, st):
    f, rng, tol = st["frame"], st["rng"], cfg.tol
    if f.rank < 3:
        return [_skip("mixed_associate", "<S_eta x, x | xi> = <S_xi x, x | eta>*",
                      "needs rank >= 3 for a nonzero x orthogonal to both associates")]
    eta = random_associate(f.algebra, f.rank, rng)
    w = _Worst(tol)
    for _ in range(cfg.trials):
        x = random_vector(f.algebra, f.rank, rng)
        w.add(mixed_associate_residual(f.vectors, f.associate, eta, x, tol), {"x": x, "eta": eta})
    return [_record("mixed_associate", "<S_eta x, x | xi> = <S_xi x, x | eta>*", w.ok, w.value, w.witness)]


def _conversions(cfg, st):
    f, rng, tol = st["frame"], st["rng"], cfg.tol
    recs = []
    mf = random_module_frame(f.algebra, f.rank, max(f.rank, len(f)), rng)
    tf = from_module_frame(mf, f.associate)
    lo, hi = tf.claimed_bounds
    a, b = frame_bounds(tf)
    res = max(0.0, lo - a, b - hi) / max(1.0, hi)
    recs.append(_record("module_frame_to_two_frame", "module frame is an A-2-frame (certified bounds)",
                        res <= tol, res, None, certified=[lo, hi], optimal=[a, b]))
    try:
        restrict_to_complement_frame(f, tol)
        recs.append(_record("two_frame_to_complement_frame", "A-2-frame is a frame for the complement of xi",
                            True, 0.0))
    except Exception as exc:  # the restriction raises when its check fails
        recs.append(_record("two_frame_to_complement_frame", "A-2-frame is a frame for the complement of xi",
                            False, None, None, error=str(exc)))
    return recs


def _tensor(cfg, st):
    f, rng, tol = st["frame"], st["rng"], cfg.tol
    recs = []
    desc = f.algebra
    g = random_frame(desc, f.rank, max(len(f), f.rank - 1), rng, min_lower=cfg.min_lower)

    a, b = optimal_bounds(f)
    c, d = optimal_bounds(g)
    tf = tensor_frame(f, g)
    pa, pb = frame_bounds(tf.product)
    res = max(0.0, a * c - pa, pb - b * d) / max(1.0, b * d)
    recs.append(_record("tensor_bounds", "tensor of A-2-frames has bounds (AC, BD)", res <= 1e-8, res,
                        None, certified=[a * c, b * d], optimal=[pa, pb]))

    w = _Worst(tol)
    for _ in range(min(cfg.trials, 50)):
        x1, x2 = (random_vector(desc, f.rank, rng) for _ in range(2))
        y1, y2 = (random_vector(desc, g.rank, rng) for _ in range(2))
        direct = tensor_two_inner(tensor_vector(x1, y1), tensor_vector(x2, y2), f.associate, g.associate)
        expanded = tensor_two_inner_expanded([(x1, y1)], [(x2, y2)], f.associate, g.associate)
        w.add(alg.norm(direct - expanded), {"x1": x1, "y1": y1, "x2": x2, "y2": y2})
    recs.append(_record("tensor_two_inner_factorization",
                        "<x1(x)y1, x2(x)y2 | xi(x)eta> = <x1,x2|xi> (x) <y1,y2|eta>", w.ok, w.value, w.witness))

    r = tensor_frame_operator_residual(f, g, samples=4, seed=cfg.seed)
    recs.append(_record("tensor_frame_operator", "S_{xi(x)eta} = S_xi (x) S_eta", r <= tol, r))

    p1 = random_frame(desc, f.rank, f.rank - 1, rng, kind="parseval")
    p2 = random_frame(desc, g.rank, g.rank + 1, rng, kind="parseval")
    pt = tensor_frame(p1, p2)
    pa, pb = frame_bounds(pt.product)
    res = max(abs(pa - 1.0), abs(pb - 1.0))
    recs.append(_record("tensor_parseval", "Parseval (x) Parseval is Parseval", res <= tol, res))

    try:
        ok = tensor_tightness_from_reconstruction(pt, tol) and tightness_from_reconstruction(
            p1.vectors, p1.associate, tol)
        recs.append(_record("tightness_from_reconstruction", "reconstruction identity gives a Parseval frame",
                            ok, None))
    except Exception as exc:
        recs.append(_record("tightness_from_reconstruction", "reconstruction identity gives a Parseval frame",
                            False, None, None, error=str(exc)))

    scalars = alg.diagonal(1)
    left = random_frame(scalars, f.rank, f.rank - 1, rng, kind="parseval")
    sf = tensor_frame(left, g)
    witness_x = left.quotient.complement_basis[0]
    A1, B1, ok = scalar_factor_restriction(sf, witness_x, tol, seed=cfg.seed)
    recs.append(_record("scalar_factor_restriction", "C (x) B-2-frame restricts to a B-2-frame",
                        ok, None, None, derived_bounds=[A1, B1]))
    return recs


CHECKS = [
    ("cauchy_schwarz", _cauchy_schwarz, True),
    ("two_norm", _two_norm, True),
    ("frame_bounds", _frame_bounds, False),
    ("frame_operators", _frame_operators, False),
    ("reconstruction", _reconstruction, False),
    ("mixed_associate", _mixed, False),
    ("conversions", _conversions, False),
    ("tensor", _tensor, False),
]


def run_suite(config: SuiteConfig, timestamp: bool = True) -> dict:
    """Execute all checks in a fixed order and return the report.

    A check that raises is recorded as a failure with the error message;
    later checks still run.  Checks that need a commutative algebra are
    recorded as skipped over matrix algebras.
    """
    rng = np.random.default_rng(config.seed)
    desc = config.descriptor
    records = []

    for r in check_axioms(_space(config), config.trials, config.seed, config.tol):
        records.append(_record(f"axiom_{r['axiom']}", "A-2-inner product axioms", r["pass"],
                               r["worst_residual"], r["witness"]))
    for r in check_module_axioms(desc, config.rank, config.trials, config.seed, config.tol):
        records.append(_record(f"module_axiom_{r['axiom']}", "pre-Hilbert module axioms", r["pass"],
                               r["worst_residual"], r["witness"]))

    state = {"rng": rng, "tol": config.tol}
    frame_error = None
    try:
        space, frame = generate_instance(config, rng)
        state.update(space=space, frame=frame)
    except Exception as exc:
        frame_error = f"instance generation failed: {exc}"
        state.update(space=_space(config), frame=None)

    for name, fn, sampling_only in CHECKS:
        if not desc.is_commutative:
            records.append(_skip(name, "", "requires commutative algebra"))
            continue
        if not sampling_only and state["frame"] is None:
            records.append(_record(name, "", False, None, None, error=frame_error or "no frame instance"))
            continue
        try:
            records.extend(fn(config, state))
        except Exception as exc:
            records.append(_record(name, "", False, None, None, error=f"{type(exc).__name__}: {exc}"))

    report = {
        "tool": "framelab",
        "version": __version__,
        "config": config.to_dict(),
        "checks": records,
        "pass": all(r["pass"] for r in records),
    }
    if timestamp:
        report["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return report


def _space(config):
    from .two_inner import TwoInnerSpace
    return TwoInnerSpace(config.descriptor, int(config.rank))


def report_text(report: dict) -> str:
    lines = []
    for r in report["checks"]:
        status = "SKIP" if r.get("status") == "skipped" else ("PASS" if r["pass"] else "FAIL")
        res = r.get("worst_residual")
        res = "-" if res is None else (f"{res:.3e}" if isinstance(res, float) else str(res))
        extra = r.get("reason") or r.get("error") or ""
        lines.append(f"{status}  {r['check']:<34} {res:>11}  {extra}".rstrip())
    lines.append("OVERALL " + ("PASS" if report["pass"] else "FAIL"))
    return "\n".join(lines)
